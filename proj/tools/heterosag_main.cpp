#include <cinttypes>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heterosag/analysis.hpp"
#include "heterosag/config.hpp"
#include "heterosag/robustness.hpp"
#include "heterosag/sim.hpp"

namespace hs = heterosag;

namespace {

hs::SSMatrix build_matrix(int groups, const std::vector<int>& subgroups) {
  if (!subgroups.empty()) return hs::build_ss_matrix_hetero(subgroups);
  return hs::build_ss_matrix(groups);
}

int cmd_plan(int groups, const std::vector<int>& subgroups,
             const std::string& format) {
  const hs::SSMatrix matrix = build_matrix(groups, subgroups);
  if (format == "csv") {
    std::cout << matrix.to_csv();
  } else {
    std::cout << matrix.to_text();
  }
  const auto closed = hs::inference_robustness_closed_form(matrix.size);
  std::printf("closed-form delta: %.6f\n", closed);
  if (matrix.size <= 20) {
    const auto brute = hs::inference_robustness_bruteforce(matrix);
    std::printf("brute-force delta: %.6f (argmin columns:", brute.delta);
    for (int c : brute.minimizing_columns) std::printf(" %d", c);
    std::printf(")\n");
  }
  return 0;
}

int cmd_verify(int groups, const std::vector<int>& subgroups) {
  const hs::SSMatrix matrix = build_matrix(groups, subgroups);
  const hs::PropertyReport rep = hs::verify_properties(matrix);
  std::printf("pairing: %s\n", rep.pairing ? "ok" : "VIOLATED");
  std::printf("property 1 (one star per column): %s\n", rep.p1 ? "ok" : "VIOLATED");
  std::printf("property 2 (pairings unique):     %s\n", rep.p2 ? "ok" : "VIOLATED");
  std::printf("property 3 (star placement):      %s\n", rep.p3 ? "ok" : "VIOLATED");
  std::printf("property 4 (subset pairing):      %s\n", rep.p4 ? "ok" : "VIOLATED");
  for (const auto& v : rep.violations) std::printf("  %s\n", v.c_str());
  if (matrix.size <= 20) {
    const auto brute = hs::inference_robustness_bruteforce(matrix);
    const auto closed = hs::inference_robustness_closed_form(matrix.size);
    std::printf("delta: brute-force %.6f, closed-form %.6f%s\n", brute.delta,
                closed,
                std::abs(brute.delta - closed) < 1e-12 ? "" : " (differ)");
  }
  return rep.all() ? 0 : 2;
}

int cmd_analyze(const hs::RoundConfig& config) {
  const hs::Topology& topo = config.topo;
  const hs::ProtocolContext ctx = hs::make_context(topo);
  hs::ErrorBoundInput input;
  input.n_users = topo.users();
  input.model_dim = topo.model_dim;
  input.r1 = topo.r1;
  input.r2 = topo.r2;
  input.quantizer_levels = topo.quantizer_levels;
  input.subgroup_counts = topo.subgroup_counts;
  input.subgroup_size = topo.subgroup_size;

  const double sigma = hs::sigma_heterosag_plus(input);
  const int kmax = topo.quantizer_levels.back();
  hs::ErrorBoundInput secag = input;
  secag.quantizer_levels = {topo.quantizer_levels.front()};
  secag.subgroup_counts = {1};
  secag.subgroup_size = topo.users();
  const double sigma_secag = hs::sigma_heterosag(secag).bound;

  const auto ops = hs::count_mask_operations(ctx.plan, topo);
  const auto be_secag = hs::bandwidth_expansion(topo.users(), kmax);
  const auto be_star =
      hs::bandwidth_expansion(topo.subgroup_size, topo.quantizer_levels.front());
  const auto be_pair = hs::bandwidth_expansion(2 * topo.subgroup_size,
                                               topo.quantizer_levels.front());
  const double leak = hs::privacy_leakage_prob(topo.subgroup_size,
                                               config.dropout_prob);

  std::printf("%-34s %-22s %s\n", "", "SecAg", "HeteroSAg");
  std::printf("%-34s %-22s %d..%d per group\n", "quantizer levels",
              std::to_string(kmax).c_str(), topo.quantizer_levels.front(), kmax);
  std::printf("%-34s %-22.6g %.6g\n", "quantization error bound", sigma_secag,
              sigma);
  std::printf("%-34s %-22lld %lld (star) / %lld (pair)\n",
              "pairwise masks per element", ops.secag_masks_per_element,
              static_cast<long long>(ops.pairwise_masks_per_element.back()),
              static_cast<long long>(ops.pairwise_masks_per_element.front()));
  std::printf("%-34s %-22lld %lld\n", "PRG symbols per user (m padded)",
              static_cast<long long>(topo.users()) * topo.padded_dim(),
              ops.prg_symbols_per_user);
  char secag_be[64], hetero_be[64];
  std::snprintf(secag_be, sizeof secag_be, "%.4gx (%d/%d bits)", be_secag.ratio,
                be_secag.encoded_bits, be_secag.clear_bits);
  std::snprintf(hetero_be, sizeof hetero_be, "%.4gx star, %.4gx pair",
                be_star.ratio, be_pair.ratio);
  std::printf("%-34s %-22s %s\n", "bandwidth expansion", secag_be, hetero_be);
  std::printf("%-34s %-22s %.6g\n", "privacy leakage probability", "0",
              leak);
  std::printf("%-34s %-22s %.6f\n", "inference robustness", "1",
              hs::inference_robustness_closed_form(ctx.topo.columns()));
  return 0;
}

int cmd_simulate(const hs::RoundConfig& config, const std::string& out_path) {
  const hs::TrainingResult result = hs::run_training(config);
  if (!out_path.empty()) hs::write_csv(out_path, config, result);
  std::printf("rounds: %zu\n", result.rows.size());
  std::printf("final loss (trailing window): %.9g\n", result.final_loss);
  if (result.time_avg_gap >= 0.0) {
    std::printf("time-averaged optimality gap: %.9g\n", result.time_avg_gap);
  }
  int leaks = 0;
  for (const auto& r : result.rows) leaks += r.leak_events;
  std::printf("privacy leak events: %d\n", leaks);
  for (int g = 0; g < config.topo.groups(); ++g) {
    std::printf("bits/user, group %d: %" PRIu64 "\n", g,
                result.total_bits_per_group_user(g));
  }
  return 0;
}

int cmd_compare(const std::vector<hs::RoundConfig>& configs) {
  const auto rows = hs::run_comparison(configs);
  std::printf("%-20s %-16s %-14s %-14s %s\n", "scenario", "bits/user/round",
              "round time s", "total time s", "final loss");
  for (const auto& row : rows) {
    std::uint64_t worst = 0;
    for (auto b : row.bits_per_user_by_group) worst = std::max(worst, b);
    std::printf("%-20s %-16" PRIu64 " %-14.6g %-14.6g ", row.name.c_str(),
                worst, row.round_time_s, row.total_time_s);
    if (row.final_loss >= 0.0) {
      std::printf("%.6g\n", row.final_loss);
    } else {
      std::printf("-\n");
    }
  }
  if (rows.size() >= 2 && rows.front().total_time_s > 0.0) {
    std::printf("time ratio (%s / %s): %.4g\n", rows.back().name.c_str(),
                rows.front().name.c_str(),
                rows.back().total_time_s / rows.front().total_time_s);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HeteroSAg secure-aggregation simulator"};
  app.require_subcommand(1);

  int groups = 5;
  std::vector<int> subgroups;
  std::string format = "text";
  auto* plan = app.add_subcommand("plan", "print the segment selection matrix");
  plan->add_option("--groups", groups, "number of groups G");
  plan->add_option("--subgroups", subgroups,
                   "subgroup counts L_0,L_1,... (hetero layout)")
      ->delimiter(',');
  plan->add_option("--format", format, "text | csv");

  auto* verify = app.add_subcommand("verify", "check matrix properties and delta");
  verify->add_option("--groups", groups, "number of groups G");
  verify->add_option("--subgroups", subgroups, "subgroup counts")->delimiter(',');

  std::string config_path;
  std::vector<std::string> overrides;
  auto* analyze = app.add_subcommand("analyze", "closed-form comparison table");
  analyze->add_option("--config", config_path, "config file")->required();
  analyze->add_option("--set", overrides, "key=value overrides");

  std::string out_path;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "run federated training rounds");
  simulate->add_option("--config", config_path, "config file")->required();
  simulate->add_option("--seed", seed, "RNG seed (required)")->required();
  simulate->add_option("--out", out_path, "CSV output path");
  simulate->add_option("--set", overrides, "key=value overrides");

  std::vector<std::string> config_paths;
  auto* compare = app.add_subcommand("compare", "communication-time comparison");
  compare->add_option("--config", config_paths, "config files, one per scenario")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return cmd_plan(groups, subgroups, format);
    if (verify->parsed()) return cmd_verify(groups, subgroups);
    if (analyze->parsed()) {
      hs::RoundConfig config = hs::load_config_file(config_path);
      for (const auto& o : overrides) hs::apply_override(config, o);
      return cmd_analyze(config);
    }
    if (simulate->parsed()) {
      hs::RoundConfig config = hs::load_config_file(config_path);
      for (const auto& o : overrides) hs::apply_override(config, o);
      config.seed = seed;
      config.seed_set = true;
      return cmd_simulate(config, out_path);
    }
    if (compare->parsed()) {
      std::vector<hs::RoundConfig> configs;
      for (const auto& p : config_paths) configs.push_back(hs::load_config_file(p));
      return cmd_compare(configs);
    }
  } catch (const hs::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const hs::protocol_error& e) {
    std::cerr << "protocol failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
