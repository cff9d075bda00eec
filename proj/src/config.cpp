#include "bankucb/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace bankucb {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

class Section {
public:
  Section(const json& doc, std::string name, std::vector<std::string>& defaulted)
      : name_(std::move(name)), defaulted_(defaulted) {
    if (doc.contains(name_)) {
      node_ = &doc.at(name_);
      if (!node_->is_object()) fail(name_, "must be an object");
    }
  }

  void allow(std::initializer_list<const char*> keys) {
    if (!node_) return;
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, _] : node_->items()) {
      if (!allowed.count(key)) fail(path(key), "unknown key");
    }
  }

  bool has(const char* key) const { return node_ && node_->contains(key); }
  const json& at(const char* key) const { return node_->at(key); }
  std::string path(const std::string& key) const { return name_ + "." + key; }

  template <typename T>
  void read(const char* key, T& out) {
    if (!has(key)) {
      defaulted_.push_back(path(key));
      return;
    }
    const json& v = at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(path(key), "must be a boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(path(key), "must be an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_unsigned() || v.get<std::int64_t>() >= 0) {
          out = v.get<T>();
        } else {
          fail(path(key), "must be nonnegative");
        }
      } else {
        out = v.get<T>();
      }
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) fail(path(key), "must be a number");
      out = v.get<T>();
      if (!std::isfinite(out)) fail(path(key), "must be finite");
    } else {
      if (!v.is_string()) fail(path(key), "must be a string");
      out = v.get<std::string>();
    }
  }

private:
  std::string name_;
  const json* node_ = nullptr;
  std::vector<std::string>& defaulted_;
};

}  // namespace

Round ExperimentConfig::resolved_stride(Round horizon_used) const {
  if (checkpoint_stride > 0) return checkpoint_stride;
  return std::max<Round>(1, horizon_used / 100);
}

Round ExperimentConfig::resolved_window(Round horizon_used) const {
  const Round w = rolling_window > 0 ? rolling_window : std::max<Round>(100, horizon_used / 20);
  return std::min(w, horizon_used);
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "environment" && key != "schedule" && key != "policy" && key != "experiment") {
      fail(key, "unknown section");
    }
  }
  if (!doc.contains("environment")) fail("environment", "section is required");

  ExperimentConfig cfg;
  auto& defaulted = cfg.defaulted;
  auto& spec = cfg.environment;

  Section env(doc, "environment", defaulted);
  if (!env.has("kind")) fail("environment.kind", "is required");
  env.read("kind", spec.kind);
  if (spec.kind == "setting1") {
    env.allow({"kind", "d", "D", "r", "h", "bump_seed"});
    env.read("d", spec.dim);
    env.read("D", spec.num_bumps);
    env.read("r", spec.radius);
    env.read("h", spec.height);
    if (env.has("bump_seed")) {
      std::uint64_t seed = 0;
      env.read("bump_seed", seed);
      spec.bump_seed = seed;
    } else {
      defaulted.push_back("environment.bump_seed");
    }
    if (spec.num_bumps < 1) fail("environment.D", "must be at least 1");
    if (!(spec.radius > 0.0)) fail("environment.r", "must be positive");
    if (!(spec.height > 0.0)) fail("environment.h", "must be positive");
  } else if (spec.kind == "setting2") {
    env.allow({"kind", "d"});
    env.read("d", spec.dim);
  } else if (spec.kind == "dataset") {
    env.allow({"kind", "path", "label_column", "header", "delimiter"});
    if (!env.has("path")) fail("environment.path", "is required for datasets");
    std::string path;
    env.read("path", path);
    spec.path = path;
    if (!env.has("label_column")) fail("environment.label_column", "is required for datasets");
    const json& label = env.at("label_column");
    if (label.is_string()) {
      spec.label_column = label.get<std::string>();
    } else if (label.is_number_unsigned()) {
      spec.label_column = label.get<std::size_t>();
    } else {
      fail("environment.label_column", "must be a column name or a zero-based index");
    }
    env.read("header", spec.has_header);
    std::string delim = ",";
    if (env.has("delimiter")) {
      env.read("delimiter", delim);
      if (delim == "\\t" || delim == "tab") delim = "\t";
      if (delim != "," && delim != "\t") fail("environment.delimiter", "must be ',' or tab");
      spec.delimiter = delim.front();
    } else {
      defaulted.push_back("environment.delimiter");
    }
  } else {
    fail("environment.kind", "must be one of setting1, setting2, dataset");
  }
  if (spec.dim < 1) fail("environment.d", "must be at least 1");

  Section schedule(doc, "schedule", defaulted);
  schedule.allow({"T", "M", "alpha"});
  if (spec.kind == "dataset") {
    if (schedule.has("T")) fail("schedule.T", "is fixed by the dataset row count");
  } else {
    schedule.read("T", cfg.horizon);
  }
  schedule.read("M", cfg.num_batches);
  schedule.read("alpha", cfg.alpha);
  if (cfg.num_batches < 1) fail("schedule.M", "must be at least 1");
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) fail("schedule.alpha", "must lie in (0, 1]");
  if (spec.kind != "dataset" && cfg.horizon < 2 * static_cast<Round>(cfg.num_batches)) {
    fail("schedule.T", "must be at least 2M");
  }

  Section policy(doc, "policy", defaulted);
  policy.allow({"L", "sigma"});
  policy.read("L", cfg.lipschitz);
  policy.read("sigma", cfg.sigma);
  if (!(cfg.lipschitz > 0.0)) fail("policy.L", "must be positive");
  if (!(cfg.sigma >= 0.0)) fail("policy.sigma", "must be nonnegative");

  Section exp(doc, "experiment", defaulted);
  exp.allow({"algorithms", "runs", "master_seed", "output_dir", "checkpoint_stride",
             "rolling_window", "write_traces"});
  if (exp.has("algorithms")) {
    const json& algs = exp.at("algorithms");
    if (!algs.is_array() || algs.empty()) {
      fail("experiment.algorithms", "must be a nonempty array");
    }
    cfg.algorithms.clear();
    for (const auto& a : algs) {
      if (!a.is_string()) fail("experiment.algorithms", "entries must be strings");
      const auto name = a.get<std::string>();
      const auto& known = known_algorithms();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        fail("experiment.algorithms", "unknown algorithm '" + name + "'");
      }
      if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), name) != cfg.algorithms.end()) {
        fail("experiment.algorithms", "duplicate algorithm '" + name + "'");
      }
      cfg.algorithms.push_back(name);
    }
  } else {
    defaulted.push_back("experiment.algorithms");
  }
  exp.read("runs", cfg.runs);
  exp.read("master_seed", cfg.master_seed);
  std::string out = cfg.output_dir.string();
  exp.read("output_dir", out);
  cfg.output_dir = out;
  exp.read("checkpoint_stride", cfg.checkpoint_stride);
  exp.read("rolling_window", cfg.rolling_window);
  exp.read("write_traces", cfg.write_traces);
  if (cfg.runs < 1) fail("experiment.runs", "must be at least 1");
  if (cfg.checkpoint_stride < 0) fail("experiment.checkpoint_stride", "must be nonnegative");
  if (cfg.rolling_window < 0) fail("experiment.rolling_window", "must be nonnegative");

  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

json config_to_json(const ExperimentConfig& cfg) {
  const auto& spec = cfg.environment;
  json env{{"kind", spec.kind}};
  if (spec.kind == "dataset") {
    env["path"] = spec.path.string();
    if (const auto* name = std::get_if<std::string>(&spec.label_column)) {
      env["label_column"] = *name;
    } else {
      env["label_column"] = std::get<std::size_t>(spec.label_column);
    }
    env["header"] = spec.has_header;
    env["delimiter"] = spec.delimiter == '\t' ? "\t" : ",";
  } else {
    env["d"] = spec.dim;
  }
  if (spec.kind == "setting1") {
    env["D"] = spec.num_bumps;
    env["r"] = spec.radius;
    env["h"] = spec.height;
    if (spec.bump_seed) env["bump_seed"] = *spec.bump_seed;
  }
  json schedule{{"M", cfg.num_batches}, {"alpha", cfg.alpha}};
  if (spec.kind != "dataset") schedule["T"] = cfg.horizon;
  return json{
      {"environment", env},
      {"schedule", schedule},
      {"policy", {{"L", cfg.lipschitz}, {"sigma", cfg.sigma}}},
      {"experiment",
       {{"algorithms", cfg.algorithms},
        {"runs", cfg.runs},
        {"master_seed", cfg.master_seed},
        {"output_dir", cfg.output_dir.string()},
        {"checkpoint_stride", cfg.checkpoint_stride},
        {"rolling_window", cfg.rolling_window},
        {"write_traces", cfg.write_traces}}},
  };
}

}  // namespace bankucb
