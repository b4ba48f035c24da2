#include "heterosag/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numeric>

#include "heterosag/quantizer.hpp"

namespace heterosag {

namespace {

constexpr std::uint64_t kDataTag = 0x6461746121ULL;
constexpr std::uint64_t kInitTag = 0x696e697421ULL;
constexpr std::uint64_t kRoundTag = 0x726f756e64ULL;
constexpr std::uint64_t kUserTag = 0x7573657221ULL;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t tag,
                       std::uint64_t idx = 0) {
  return std::mt19937_64(splitmix64(splitmix64(seed ^ tag) + idx));
}

double gauss(std::mt19937_64& rng) {
  const double u1 = std::max(uniform01(rng), 1e-300);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

class Task {
 public:
  virtual ~Task() = default;
  virtual std::vector<double> initial_theta(std::mt19937_64& rng) const = 0;
  virtual std::vector<double> user_gradient(int user,
                                            const std::vector<double>& theta,
                                            bool flip_labels,
                                            std::mt19937_64& rng) const = 0;
  virtual double global_loss(const std::vector<double>& theta) const = 0;
  virtual double optimality_gap(const std::vector<double>& theta) const {
    return -1.0;
  }
};

/// F(theta) = 1/(2D) sum_j ||theta - c_j||^2; optimum is the center mean and
/// the gradient is 1-Lipschitz, so eta = 1 matches the step rule eta = 1/L.
class QuadraticTask : public Task {
 public:
  QuadraticTask(const TaskSpec& spec, std::uint64_t seed) : spec_(spec) {
    auto rng = stream(seed, kDataTag);
    centers_.assign(spec.data_points, std::vector<double>(spec.dim));
    mean_.assign(spec.dim, 0.0);
    for (auto& c : centers_) {
      for (int d = 0; d < spec.dim; ++d) {
        c[d] = spec.center_radius * (2.0 * uniform01(rng) - 1.0);
        mean_[d] += c[d] / spec.data_points;
      }
    }
  }

  std::vector<double> initial_theta(std::mt19937_64& rng) const override {
    std::vector<double> theta(spec_.dim);
    for (int d = 0; d < spec_.dim; ++d) {
      theta[d] = mean_[d] + spec_.init_radius * (2.0 * uniform01(rng) - 1.0);
    }
    return theta;
  }

  std::vector<double> user_gradient(int, const std::vector<double>& theta,
                                    bool, std::mt19937_64& rng) const override {
    // Uniform batch sampling from the global pool keeps every user's
    // gradient an unbiased estimator of the true gradient.
    std::vector<double> grad(theta);
    if (spec_.batch_size <= 0) {
      for (int d = 0; d < spec_.dim; ++d) grad[d] -= mean_[d];
      return grad;
    }
    std::vector<double> sample_mean(spec_.dim, 0.0);
    for (int b = 0; b < spec_.batch_size; ++b) {
      const auto& c = centers_[rng() % centers_.size()];
      for (int d = 0; d < spec_.dim; ++d) sample_mean[d] += c[d] / spec_.batch_size;
    }
    for (int d = 0; d < spec_.dim; ++d) grad[d] -= sample_mean[d];
    return grad;
  }

  double global_loss(const std::vector<double>& theta) const override {
    double acc = 0.0;
    for (const auto& c : centers_) {
      for (int d = 0; d < spec_.dim; ++d) {
        const double e = theta[d] - c[d];
        acc += 0.5 * e * e;
      }
    }
    return acc / centers_.size();
  }

  double optimality_gap(const std::vector<double>& theta) const override {
    double acc = 0.0;
    for (int d = 0; d < spec_.dim; ++d) {
      const double e = theta[d] - mean_[d];
      acc += 0.5 * e * e;
    }
    return acc;
  }

  const std::vector<double>& optimum() const { return mean_; }

 private:
  TaskSpec spec_;
  std::vector<std::vector<double>> centers_;
  std::vector<double> mean_;
};

/// Two Gaussian blobs separated along the first feature; parameters are
/// dim-1 weights plus a bias. Each user owns an IID slice of the pool.
class LogisticBlobsTask : public Task {
 public:
  LogisticBlobsTask(const TaskSpec& spec, int users, std::uint64_t seed)
      : spec_(spec), users_(users), features_(spec.dim - 1) {
    if (spec.dim < 2) throw config_error("logistic_blobs: dim >= 2");
    auto rng = stream(seed, kDataTag);
    const int total = spec.data_points * users;
    x_.assign(total, std::vector<double>(features_));
    y_.assign(total, 0);
    for (int i = 0; i < total; ++i) {
      const int label = i < total / 2 ? 0 : 1;
      y_[i] = label;
      for (int f = 0; f < features_; ++f) x_[i][f] = gauss(rng);
      x_[i][0] += (label == 0 ? -0.5 : 0.5) * spec.separation;
    }
    // IID shuffle before slicing into per-user datasets.
    for (int i = total - 1; i > 0; --i) {
      const int j = static_cast<int>(rng() % (i + 1));
      std::swap(x_[i], x_[j]);
      std::swap(y_[i], y_[j]);
    }
  }

  std::vector<double> initial_theta(std::mt19937_64&) const override {
    return std::vector<double>(spec_.dim, 0.0);
  }

  std::vector<double> user_gradient(int user, const std::vector<double>& theta,
                                    bool flip_labels,
                                    std::mt19937_64&) const override {
    const int per = spec_.data_points;
    std::vector<double> grad(spec_.dim, 0.0);
    for (int i = user * per; i < (user + 1) * per; ++i) {
      int label = y_[i];
      if (flip_labels) {
        label = ((label + label_shift_ % spec_.num_classes) %
                     spec_.num_classes + spec_.num_classes) % spec_.num_classes;
      }
      const double margin = logit(theta, i);
      const double p = 1.0 / (1.0 + std::exp(-margin));
      const double res = (p - label) / per;
      for (int f = 0; f < features_; ++f) grad[f] += res * x_[i][f];
      grad[features_] += res;
    }
    return grad;
  }

  double global_loss(const std::vector<double>& theta) const override {
    double acc = 0.0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const double z = logit(theta, i);
      acc += std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0) - y_[i] * z;
    }
    return acc / x_.size();
  }

  void set_label_shift(int shift) { label_shift_ = shift; }

 private:
  double logit(const std::vector<double>& theta, std::size_t i) const {
    double z = theta[features_];
    for (int f = 0; f < features_; ++f) z += theta[f] * x_[i][f];
    return z;
  }

  TaskSpec spec_;
  int users_;
  int features_;
  int label_shift_ = -9;
  std::vector<std::vector<double>> x_;
  std::vector<int> y_;
};

std::unique_ptr<Task> make_task(const RoundConfig& config) {
  switch (config.task.kind) {
    case TaskSpec::Kind::quadratic:
      return std::make_unique<QuadraticTask>(config.task, config.seed);
    case TaskSpec::Kind::logistic_blobs: {
      auto task = std::make_unique<LogisticBlobsTask>(
          config.task, config.topo.users(), config.seed);
      task->set_label_shift(config.attack.label_shift);
      return task;
    }
    case TaskSpec::Kind::none:
      return nullptr;
  }
  throw config_error("unknown task kind");
}

}  // namespace

void RoundConfig::validate() const {
  topo.validate();
  if (eta <= 0.0) throw config_error("config: eta must be positive");
  if (rounds < 1) throw config_error("config: rounds >= 1");
  if (dropout_prob < 0.0 || dropout_prob > 1.0) {
    throw config_error("config: dropout probability in [0, 1]");
  }
  if (task.kind != TaskSpec::Kind::none && task.dim != topo.model_dim) {
    throw config_error("config: task dim must equal model_dim");
  }
  for (int u : attack.byzantine_users) {
    if (u < 0 || u >= topo.users()) {
      throw config_error("config: byzantine user id outside [0, N)");
    }
  }
  if (!rates_mbps.empty() &&
      static_cast<int>(rates_mbps.size()) != topo.groups()) {
    throw config_error("config: one rate per group");
  }
}

std::uint64_t TrainingResult::total_bits_per_group_user(int g) const {
  std::uint64_t total = 0;
  for (const auto& row : rows) total += row.bits_per_group.at(g);
  return total;
}

TrainingResult run_training(const RoundConfig& config) {
  config.validate();
  if (config.task.kind == TaskSpec::Kind::none) {
    throw config_error("run_training: config has no task");
  }
  auto task = make_task(config);
  ProtocolContext ctx = make_context(config.topo);
  const int n = ctx.topo.users();
  const int seg = ctx.topo.segment_len();

  auto init_rng = stream(config.seed, kInitTag);
  std::vector<double> theta = task->initial_theta(init_rng);
  std::vector<double> theta_sum(theta.size(), 0.0);

  const auto* quad = dynamic_cast<const QuadraticTask*>(task.get());
  double theta0_dist_sq = 0.0;
  if (quad) {
    for (std::size_t d = 0; d < theta.size(); ++d) {
      const double e = theta[d] - quad->optimum()[d];
      theta0_dist_sq += e * e;
    }
  }

  TrainingResult result;
  result.theta0_dist_sq = theta0_dist_sq;

  for (int t = 0; t < config.rounds; ++t) {
    auto round_rng = stream(config.seed, kRoundTag, t);
    std::vector<UserState> users;
    std::vector<char> dropped(n, 0);
    std::vector<MaskedSegment> wire;
    RoundOutcome outcome;
    try {
      users = setup_round(ctx, round_rng);
      for (int u = 0; u < n; ++u) {
        dropped[u] = uniform01(round_rng) < config.dropout_prob ? 1 : 0;
      }
      for (int u = 0; u < n; ++u) {
        auto user_rng = stream(config.seed, kUserTag,
                               static_cast<std::uint64_t>(t) * n + u);
        const bool byz = config.attack.kind != AttackKind::none &&
                         config.attack.is_byzantine(u);
        const bool flip = byz && config.attack.kind == AttackKind::label_flip;
        users[u].update = task->user_gradient(u, theta, flip, user_rng);
        if (byz) inject_attack(users[u].update, config.attack, user_rng);
        if (dropped[u]) continue;
        auto segs = encode_segments(ctx, users[u], user_rng);
        wire.insert(wire.end(), std::make_move_iterator(segs.begin()),
                    std::make_move_iterator(segs.end()));
      }
      outcome = server_decode(ctx, wire, dropped, users);
    } catch (const protocol_error& e) {
      throw protocol_error("round " + std::to_string(t) + ": " + e.what());
    }

    // Aggregate to an average-scale update per level.
    std::vector<double> update(ctx.topo.padded_dim(), 0.0);
    std::vector<std::vector<const DecodedSegment*>> per_level(ctx.plan.levels);
    for (const DecodedSegment& dec : outcome.segments) {
      if (!dec.empty) per_level[dec.level].push_back(&dec);
    }
    for (int l = 0; l < ctx.plan.levels; ++l) {
      if (per_level[l].empty()) continue;  // whole level dropped out
      if (config.aggregator == Aggregator::median) {
        std::vector<std::vector<double>> averages;
        for (const DecodedSegment* dec : per_level[l]) {
          std::vector<double> avg(dec->real_sum);
          for (double& v : avg) v /= dec->survivors.size();
          averages.push_back(std::move(avg));
        }
        const auto med = coordinate_median(averages);
        std::copy(med.begin(), med.end(), update.begin() + l * seg);
      } else {
        int survivors = 0;
        for (const DecodedSegment* dec : per_level[l]) {
          survivors += static_cast<int>(dec->survivors.size());
          for (int i = 0; i < seg; ++i) update[l * seg + i] += dec->real_sum[i];
        }
        for (int i = 0; i < seg; ++i) update[l * seg + i] /= survivors;
      }
    }
    for (std::size_t d = 0; d < theta.size(); ++d) {
      theta[d] -= config.eta * update[d];
    }
    for (std::size_t d = 0; d < theta.size(); ++d) theta_sum[d] += theta[d];

    RoundLogRow row;
    row.round = t;
    row.loss = task->global_loss(theta);
    row.opt_gap = task->optimality_gap(theta);
    row.survivors = n - static_cast<int>(std::count(dropped.begin(),
                                                    dropped.end(), 1));
    row.leak_events = outcome.leak_events;
    row.bits_per_group.assign(ctx.topo.groups(), 0);
    for (int u = 0; u < n; ++u) {
      if (dropped[u]) continue;
      const int g = ctx.matrix.column_group[ctx.topo.column_of_user(u)];
      row.bits_per_group[g] =
          std::max(row.bits_per_group[g], outcome.bits_per_user[u]);
    }
    result.rows.push_back(std::move(row));
  }

  result.theta = theta;
  result.theta_time_avg.resize(theta.size());
  for (std::size_t d = 0; d < theta.size(); ++d) {
    result.theta_time_avg[d] = theta_sum[d] / config.rounds;
  }
  const int window = std::max(1, config.rounds * 2 / 5);
  double acc = 0.0;
  for (int t = config.rounds - window; t < config.rounds; ++t) {
    acc += result.rows[t].loss;
  }
  result.final_loss = acc / window;
  if (quad) {
    result.time_avg_gap = quad->optimality_gap(result.theta_time_avg);
  }
  return result;
}

void write_csv(const std::string& path, const RoundConfig& config,
               const TrainingResult& result) {
  std::ofstream out(path);
  if (!out) throw config_error("write_csv: cannot open " + path);
  out << "round,loss,opt_gap,survivors,leak_events";
  for (int g = 0; g < config.topo.groups(); ++g) out << ",bits_group" << g;
  out << '\n';
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return std::string(buf);
  };
  for (const auto& row : result.rows) {
    out << row.round << ',' << fmt(row.loss) << ',' << fmt(row.opt_gap) << ','
        << row.survivors << ',' << row.leak_events;
    for (auto b : row.bits_per_group) out << ',' << b;
    out << '\n';
  }
}

std::vector<ComparisonRow> run_comparison(
    const std::vector<RoundConfig>& configs) {
  std::vector<ComparisonRow> rows;
  for (const RoundConfig& config : configs) {
    config.validate();
    ComparisonRow row;
    row.name = config.name;
    const int groups = config.topo.groups();
    row.bits_per_user_by_group.assign(groups, 0);
    if (config.clear_baseline) {
      // Unencoded 32-bit floats; no ring expansion, no masking.
      const std::uint64_t bits =
          static_cast<std::uint64_t>(config.topo.model_dim) * 32;
      for (int g = 0; g < groups; ++g) row.bits_per_user_by_group[g] = bits;
    } else {
      const ProtocolContext ctx = make_context(config.topo);
      for (int c = 0; c < ctx.topo.columns(); ++c) {
        const int g = ctx.matrix.column_group[c];
        row.bits_per_user_by_group[g] =
            std::max(row.bits_per_user_by_group[g],
                     ctx.bits_per_round(c * ctx.topo.subgroup_size));
      }
    }
    if (!config.rates_mbps.empty()) {
      double slowest = 0.0;
      for (int g = 0; g < groups; ++g) {
        slowest = std::max(slowest, static_cast<double>(
                                        row.bits_per_user_by_group[g]) /
                                        (config.rates_mbps[g] * 1e6));
      }
      row.round_time_s = slowest;
      row.total_time_s = slowest * config.rounds;
    }
    if (config.task.kind != TaskSpec::Kind::none) {
      row.final_loss = run_training(config).final_loss;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace heterosag
