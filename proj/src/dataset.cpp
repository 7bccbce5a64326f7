#include "simstore/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "simstore/common.hpp"

namespace simstore {

Dataset Dataset::from_records(std::vector<TransitionRecord> records) {
  Dataset d;
  d.records = std::move(records);
  d.episodes = group_episodes(d.records);
  return d;
}

std::vector<Episode> group_episodes(const std::vector<TransitionRecord>& records) {
  std::vector<Episode> episodes;
  std::unordered_map<CustomerId, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TransitionRecord& rec = records[i];
    auto [it, inserted] = index.emplace(rec.customer_id, episodes.size());
    if (inserted) {
      episodes.push_back(Episode{rec.customer_id, {}});
    }
    Episode& ep = episodes[it->second];
    if (!ep.records.empty()) {
      const TransitionRecord& prev = records[static_cast<std::size_t>(ep.records.back())];
      if (prev.terminal) {
        throw DataError("episode for customer " + std::to_string(rec.customer_id) +
                        " continues past a terminal record");
      }
      if (!(rec.time > prev.time)) {
        throw DataError("episode timestamps must be strictly increasing (customer " +
                        std::to_string(rec.customer_id) + ")");
      }
    }
    ep.records.push_back(static_cast<int>(i));
  }
  for (const Episode& ep : episodes) {
    if (!records[static_cast<std::size_t>(ep.records.back())].terminal) {
      throw DataError("episode for customer " + std::to_string(ep.customer_id) +
                      " does not end with a terminal record");
    }
  }
  return episodes;
}

double compute_return(const std::vector<TransitionRecord>& records, const Episode& episode, int i,
                      double gamma, Time time_unit) {
  if (gamma < 0.0 || gamma > 1.0) throw ContractViolation("compute_return: gamma must be in [0, 1]");
  if (i < 0 || i >= static_cast<int>(episode.records.size())) {
    throw ContractViolation("compute_return: index out of range");
  }
  const Time t0 = records[static_cast<std::size_t>(episode.records[static_cast<std::size_t>(i)])].time;
  double total = 0;
  for (std::size_t j = static_cast<std::size_t>(i); j < episode.records.size(); ++j) {
    const TransitionRecord& rec = records[static_cast<std::size_t>(episode.records[j])];
    double exponent = (rec.time - t0) / time_unit;
    // 0^0 = 1 so gamma = 0 still pays the immediate reward.
    double discount = exponent == 0.0 ? 1.0 : std::pow(gamma, exponent);
    total += rec.reward * discount;
  }
  return total;
}

double n_step_target(const std::vector<TransitionRecord>& records, const Episode& episode, int i,
                     int n, double gamma, Time time_unit,
                     const std::function<Vec(const Vec&)>& q_target) {
  if (n < 1) throw ContractViolation("n_step_target: n must be at least 1");
  if (i < 0 || i >= static_cast<int>(episode.records.size())) {
    throw ContractViolation("n_step_target: index out of range");
  }
  const int len = static_cast<int>(episode.records.size());
  const int m = std::min(n, len - i);
  const Time t0 = records[static_cast<std::size_t>(episode.records[static_cast<std::size_t>(i)])].time;
  double total = 0;
  for (int k = 0; k < m; ++k) {
    const TransitionRecord& rec =
        records[static_cast<std::size_t>(episode.records[static_cast<std::size_t>(i + k)])];
    double exponent = (rec.time - t0) / time_unit;
    total += rec.reward * (exponent == 0.0 ? 1.0 : std::pow(gamma, exponent));
  }
  if (i + m < len) {
    const TransitionRecord& boot =
        records[static_cast<std::size_t>(episode.records[static_cast<std::size_t>(i + m)])];
    double exponent = (boot.time - t0) / time_unit;
    double discount = exponent == 0.0 ? 1.0 : std::pow(gamma, exponent);
    total += discount * q_target(boot.obs).maxCoeff();
  }
  return total;
}

namespace {

Split split_index_groups(const std::vector<std::vector<int>>& groups, double train_fraction, Rng& rng) {
  std::vector<std::size_t> order(groups.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(groups.size())));
  n_train = std::min(n_train, groups.size());
  Split split;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto& side = i < n_train ? split.train : split.test;
    for (int idx : groups[order[i]]) side.push_back(idx);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

}  // namespace

Split split_episodes(const Dataset& dataset, double train_fraction, Rng& rng) {
  if (dataset.records.empty()) throw DataError("cannot split an empty dataset");
  std::vector<std::vector<int>> groups;
  groups.reserve(dataset.episodes.size());
  for (const Episode& ep : dataset.episodes) groups.push_back(ep.records);
  return split_index_groups(groups, train_fraction, rng);
}

Split split_orders(const Dataset& dataset, double train_fraction, Rng& rng) {
  if (dataset.records.empty()) throw DataError("cannot split an empty dataset");
  std::vector<std::vector<int>> groups;
  groups.reserve(dataset.records.size());
  for (std::size_t i = 0; i < dataset.records.size(); ++i) groups.push_back({static_cast<int>(i)});
  return split_index_groups(groups, train_fraction, rng);
}

NormalizationSpec::Mode NormalizationSpec::mode_from_string(const std::string& name) {
  if (name == "minmax") return Mode::kMinmax;
  if (name == "standard") return Mode::kStandard;
  if (name == "none") return Mode::kNone;
  throw ConfigError("unknown state transformation '" + name + "'");
}

std::string NormalizationSpec::mode_to_string(Mode mode) {
  switch (mode) {
    case Mode::kMinmax: return "minmax";
    case Mode::kStandard: return "standard";
    case Mode::kNone: return "none";
  }
  return "?";
}

Vec NormalizationSpec::apply_obs(const Vec& obs) const {
  if (mode == Mode::kNone) return obs;
  Vec out(obs.size());
  for (Eigen::Index f = 0; f < obs.size(); ++f) {
    if (mode == Mode::kMinmax) {
      double range = stat_b[f] - stat_a[f];
      out[f] = range == 0.0 ? 0.0 : (obs[f] - stat_a[f]) / range;
    } else {
      out[f] = stat_b[f] == 0.0 ? 0.0 : (obs[f] - stat_a[f]) / stat_b[f];
    }
  }
  return out;
}

double NormalizationSpec::apply_reward(double reward) const {
  if (mode == Mode::kNone) return reward;
  return reward_scale == 0.0 ? 0.0 : reward / reward_scale;
}

NormalizationSpec fit_normalizer(const std::vector<TransitionRecord>& records,
                                 const std::vector<int>& train_indices,
                                 NormalizationSpec::Mode mode) {
  if (train_indices.empty()) throw DataError("cannot fit a normalizer on an empty training split");
  NormalizationSpec spec;
  spec.mode = mode;
  if (mode == NormalizationSpec::Mode::kNone) return spec;

  const auto dim = records[static_cast<std::size_t>(train_indices.front())].obs.size();
  const double n = static_cast<double>(train_indices.size());
  spec.reward_scale = 0;
  if (mode == NormalizationSpec::Mode::kMinmax) {
    spec.stat_a = Vec::Constant(dim, std::numeric_limits<double>::infinity());
    spec.stat_b = Vec::Constant(dim, -std::numeric_limits<double>::infinity());
    for (int idx : train_indices) {
      const TransitionRecord& rec = records[static_cast<std::size_t>(idx)];
      spec.stat_a = spec.stat_a.cwiseMin(rec.obs);
      spec.stat_b = spec.stat_b.cwiseMax(rec.obs);
      spec.reward_scale = std::max(spec.reward_scale, std::abs(rec.reward));
    }
  } else {
    Vec sum = Vec::Zero(dim);
    Vec sum_sq = Vec::Zero(dim);
    for (int idx : train_indices) {
      const TransitionRecord& rec = records[static_cast<std::size_t>(idx)];
      sum += rec.obs;
      sum_sq += rec.obs.cwiseProduct(rec.obs);
      spec.reward_scale = std::max(spec.reward_scale, std::abs(rec.reward));
    }
    spec.stat_a = sum / n;
    Vec var = (sum_sq / n - spec.stat_a.cwiseProduct(spec.stat_a)).cwiseMax(0.0);
    spec.stat_b = var.cwiseSqrt();
  }
  return spec;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_double(const std::string& s, int line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("line " + std::to_string(line_no) + ": cannot parse number '" + s + "'");
  }
}

}  // namespace

void write_dataset(const std::string& path, const std::vector<TransitionRecord>& records) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  const auto& names = observation_field_names();
  out << "time\tcustomer_id\taction\treward\tinferred_outcome\tterminal";
  for (const char* name : names) out << "\to_" << name;
  for (const char* name : names) out << "\tnext_" << name;
  out << "\n";
  for (const TransitionRecord& rec : records) {
    out << format_double(rec.time) << '\t' << rec.customer_id << '\t' << rec.action << '\t'
        << format_double(rec.reward) << '\t' << rec.inferred_outcome << '\t' << (rec.terminal ? 1 : 0);
    for (Eigen::Index f = 0; f < rec.obs.size(); ++f) out << '\t' << format_double(rec.obs[f]);
    for (int f = 0; f < kObservationDim; ++f) {
      out << '\t';
      if (!rec.terminal) out << format_double(rec.next_obs[f]);
    }
    out << "\n";
  }
  if (!out) throw DataError("failed while writing '" + path + "'");
}

std::vector<TransitionRecord> read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) return {};

  const auto& names = observation_field_names();
  std::ostringstream expected;
  expected << "time\tcustomer_id\taction\treward\tinferred_outcome\tterminal";
  for (const char* name : names) expected << "\to_" << name;
  for (const char* name : names) expected << "\tnext_" << name;
  if (line != expected.str()) {
    throw DataError("dataset '" + path + "' has an unexpected header (schema mismatch)");
  }

  std::vector<TransitionRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_line(line, '\t');
    if (fields.size() != 6 + 2 * kObservationDim) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(6 + 2 * kObservationDim) + " columns, got " +
                      std::to_string(fields.size()));
    }
    TransitionRecord rec;
    rec.time = parse_double(fields[0], line_no);
    rec.customer_id = static_cast<CustomerId>(std::llround(parse_double(fields[1], line_no)));
    rec.action = static_cast<int>(parse_double(fields[2], line_no));
    rec.reward = parse_double(fields[3], line_no);
    rec.inferred_outcome = static_cast<int>(parse_double(fields[4], line_no));
    rec.terminal = parse_double(fields[5], line_no) != 0.0;
    rec.obs = Vec(kObservationDim);
    for (int f = 0; f < kObservationDim; ++f) {
      rec.obs[f] = parse_double(fields[static_cast<std::size_t>(6 + f)], line_no);
    }
    if (rec.terminal) {
      rec.next_obs = Vec();
    } else {
      rec.next_obs = Vec(kObservationDim);
      for (int f = 0; f < kObservationDim; ++f) {
        rec.next_obs[f] = parse_double(fields[static_cast<std::size_t>(6 + kObservationDim + f)], line_no);
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_dataset_metadata(const std::string& dataset_path, const nlohmann::json& metadata) {
  std::string path = dataset_path + ".meta.json";
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << metadata.dump(2) << "\n";
}

nlohmann::json read_dataset_metadata(const std::string& dataset_path) {
  return load_json_file(dataset_path + ".meta.json");
}

}  // namespace simstore
