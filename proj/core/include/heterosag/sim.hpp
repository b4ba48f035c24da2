#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "heterosag/byzantine.hpp"
#include "heterosag/protocol.hpp"

namespace heterosag {

/// Synthetic convex tasks. `quadratic` has a known optimum and exactly
/// satisfies the smoothness/unbiasedness assumptions of the convergence
/// bound; `logistic_blobs` carries labels, so label flipping is meaningful.
struct TaskSpec {
  enum class Kind { quadratic, logistic_blobs, none } kind = Kind::quadratic;

  // quadratic: F(theta) = 1/(2D) sum_j ||theta - c_j||^2 over D centers
  int dim = 20;                 // parameter count before padding
  int data_points = 64;         // centers (quadratic) or points per user
  double center_radius = 0.2;   // quadratic center box half-width
  double init_radius = 0.5;     // theta0 offset box half-width
  int batch_size = 0;           // 0 = full batch

  // logistic_blobs: two Gaussian blobs in `dim - 1` features plus a bias
  double separation = 4.6;
  int num_classes = 2;
};

enum class Aggregator { mean, median };

struct RoundConfig {
  Topology topo;
  double dropout_prob = 0.0;
  AttackSpec attack;
  Aggregator aggregator = Aggregator::mean;
  double eta = 0.1;
  int rounds = 100;
  TaskSpec task;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<double> rates_mbps;  // per group; used by `compare`
  bool clear_baseline = false;     // comparison row: unmasked 32-bit floats
  std::string name = "run";

  void validate() const;  // throws config_error
};

struct RoundLogRow {
  int round = 0;
  double loss = 0.0;
  double opt_gap = -1.0;  // -1 when theta* is unknown
  int survivors = 0;
  int leak_events = 0;
  std::vector<std::uint64_t> bits_per_group;
};

struct TrainingResult {
  std::vector<RoundLogRow> rows;
  std::vector<double> theta;
  std::vector<double> theta_time_avg;
  double final_loss = 0.0;       // mean loss over the trailing window
  double time_avg_gap = -1.0;    // F(theta-bar) - F* for the quadratic task
  double theta0_dist_sq = 0.0;   // ||theta0 - theta*||^2 when known
  std::uint64_t total_bits_per_group_user(int g) const;
};

/// Distributed rounds of quantize/mask/decode with the configured task,
/// attack, dropout and aggregator. Fully deterministic given config.seed.
TrainingResult run_training(const RoundConfig& config);

void write_csv(const std::string& path, const RoundConfig& config,
               const TrainingResult& result);

struct ComparisonRow {
  std::string name;
  std::vector<std::uint64_t> bits_per_user_by_group;  // per round
  double round_time_s = 0.0;   // max over groups of bits / rate
  double total_time_s = 0.0;   // round_time * rounds
  double final_loss = -1.0;    // only when the config carries a task
};

/// Communication-time comparison across quantization schemes. Configs with
/// task kind `none` are accounted analytically without running training.
std::vector<ComparisonRow> run_comparison(const std::vector<RoundConfig>& configs);

}  // namespace heterosag
