#include "heterosag/config.hpp"

#include <fstream>
#include <sstream>

namespace heterosag {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(trim(tok));
  return out;
}

std::vector<int> int_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& t : split_csv(s)) out.push_back(std::stoi(t));
  return out;
}

std::vector<double> double_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split_csv(s)) out.push_back(std::stod(t));
  return out;
}

void set_key(RoundConfig& c, const std::string& key, const std::string& value) {
  if (key == "name") {
    c.name = value;
  } else if (key == "groups") {
    const int g = std::stoi(value);
    if (c.topo.subgroup_counts.empty()) c.topo.subgroup_counts.assign(g, 1);
  } else if (key == "subgroups") {
    c.topo.subgroup_counts = int_list(value);
  } else if (key == "group_size") {
    c.topo.subgroup_size = std::stoi(value);
  } else if (key == "levels") {
    c.topo.quantizer_levels = int_list(value);
  } else if (key == "r1") {
    c.topo.r1 = std::stod(value);
  } else if (key == "r2") {
    c.topo.r2 = std::stod(value);
  } else if (key == "model_dim") {
    c.topo.model_dim = std::stoi(value);
    if (c.task.dim == 0) c.task.dim = c.topo.model_dim;
  } else if (key == "dropout") {
    c.dropout_prob = std::stod(value);
  } else if (key == "attack") {
    if (value == "none") c.attack.kind = AttackKind::none;
    else if (value == "gaussian") c.attack.kind = AttackKind::gaussian;
    else if (value == "sign_flip") c.attack.kind = AttackKind::sign_flip;
    else if (value == "label_flip") c.attack.kind = AttackKind::label_flip;
    else throw config_error("config: unknown attack '" + value + "'");
  } else if (key == "attack_sigma") {
    c.attack.sigma = std::stod(value);
  } else if (key == "attack_multiplier") {
    c.attack.multiplier = std::stod(value);
  } else if (key == "label_shift") {
    c.attack.label_shift = std::stoi(value);
  } else if (key == "label_multiplier") {
    c.attack.label_multiplier = std::stod(value);
  } else if (key == "byzantine") {
    c.attack.byzantine_users = int_list(value);
  } else if (key == "aggregator") {
    if (value == "mean") c.aggregator = Aggregator::mean;
    else if (value == "median") c.aggregator = Aggregator::median;
    else throw config_error("config: unknown aggregator '" + value + "'");
  } else if (key == "eta") {
    c.eta = std::stod(value);
  } else if (key == "rounds") {
    c.rounds = std::stoi(value);
  } else if (key == "task") {
    if (value == "quadratic") c.task.kind = TaskSpec::Kind::quadratic;
    else if (value == "logistic_blobs") c.task.kind = TaskSpec::Kind::logistic_blobs;
    else if (value == "none") c.task.kind = TaskSpec::Kind::none;
    else throw config_error("config: unknown task '" + value + "'");
  } else if (key == "task_dim") {
    c.task.dim = std::stoi(value);
  } else if (key == "task_points") {
    c.task.data_points = std::stoi(value);
  } else if (key == "task_separation") {
    c.task.separation = std::stod(value);
  } else if (key == "task_center_radius") {
    c.task.center_radius = std::stod(value);
  } else if (key == "task_init_radius") {
    c.task.init_radius = std::stod(value);
  } else if (key == "task_batch") {
    c.task.batch_size = std::stoi(value);
  } else if (key == "rates") {
    c.rates_mbps = double_list(value);
  } else if (key == "clear32") {
    c.clear_baseline = std::stoi(value) != 0;
  } else if (key == "seed") {
    c.seed = std::stoull(value);
    c.seed_set = true;
  } else {
    throw config_error("config: unknown key '" + key + "'");
  }
}

}  // namespace

RoundConfig parse_config_text(const std::string& text) {
  RoundConfig config;
  config.task.dim = 0;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config line " + std::to_string(lineno) +
                         ": expected key = value");
    }
    try {
      set_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw config_error("config line " + std::to_string(lineno) + ": " +
                         e.what());
    }
  }
  if (config.task.dim == 0) config.task.dim = config.topo.model_dim;
  return config;
}

RoundConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str());
}

void apply_override(RoundConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw config_error("override must be key=value: " + assignment);
  }
  set_key(config, trim(assignment.substr(0, eq)),
          trim(assignment.substr(eq + 1)));
}

}  // namespace heterosag
