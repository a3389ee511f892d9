#include "iiotsec/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>

#include "iiotsec/common/error.hpp"

namespace iiotsec::cli {

std::string_view mode_name(Mode m) { return m == Mode::Binary ? "binary" : "multiclass"; }

Mode mode_from_name(std::string_view name) {
  if (name == "binary") return Mode::Binary;
  if (name == "multiclass") return Mode::Multiclass;
  throw ConfigError("mode must be 'binary' or 'multiclass', got '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (dataset_path.has_value() == synthetic.has_value())
    throw ConfigError("config needs exactly one data source (data.path or data.synthetic)");
  if (!seed) throw ConfigError("a seed is required (--seed, IIOTSEC_SEED or \"seed\" in the config)");
  if (knn_k.empty()) throw ConfigError("rsl_knn.k must list at least one K");
}

std::uint64_t RunConfig::required_seed() const {
  if (!seed) throw ConfigError("a seed is required");
  return *seed;
}

RunConfig default_config() {
  RunConfig c;
  c.synthetic = dataset::default_synthetic_config();
  return c;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  return p.is_relative() && !base.empty() ? base / p : p;
}

const std::vector<std::string> kTopKeys{"seed", "mode", "out", "scenario", "model_path", "threads",
                                        "data", "split", "model", "decision_tree", "rsl_knn"};

}  // namespace

RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (std::find(kTopKeys.begin(), kTopKeys.end(), key) == kTopKeys.end())
      throw ConfigError("unknown config key '" + key + "'");
  RunConfig c;
  try {
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("mode")) c.mode = mode_from_name(doc["mode"].get<std::string>());
    if (doc.contains("out")) c.out_dir = resolve(doc["out"].get<std::string>(), base_dir);
    if (doc.contains("scenario")) c.scenario = doc["scenario"].get<std::string>();
    if (doc.contains("model_path")) c.model_path = resolve(doc["model_path"].get<std::string>(), base_dir);
    if (doc.contains("threads")) c.threads = doc["threads"].get<std::size_t>();
    if (doc.contains("data")) {
      const auto& d = doc["data"];
      if (d.contains("path")) c.dataset_path = resolve(d["path"].get<std::string>(), base_dir);
      if (d.contains("synthetic")) c.synthetic = dataset::synthetic_config_from_json(d["synthetic"]);
    } else {
      c.synthetic = dataset::default_synthetic_config();
    }
    if (doc.contains("split")) {
      const auto& s = doc["split"];
      c.split.train = s.value("train", c.split.train);
      c.split.validation = s.value("validation", c.split.validation);
      c.split.test = s.value("test", c.split.test);
    }
    if (doc.contains("model")) c.model = nn::model_config_from_json(doc["model"], c.model);
    if (doc.contains("decision_tree")) {
      const auto& t = doc["decision_tree"];
      if (t.contains("max_depth"))
        c.decision_tree.max_depth =
            t["max_depth"].is_null() ? std::nullopt : std::optional<std::size_t>(t["max_depth"].get<std::size_t>());
      c.decision_tree.min_samples_split = t.value("min_samples_split", c.decision_tree.min_samples_split);
    }
    if (doc.contains("rsl_knn")) {
      const auto& k = doc["rsl_knn"];
      if (k.contains("k")) c.knn_k = k["k"].get<std::vector<std::size_t>>();
      c.knn_subspaces = k.value("n_subspaces", c.knn_subspaces);
      c.knn_subspace_dim = k.value("subspace_dim", c.knn_subspace_dim);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

Overrides overrides_from_env() {
  auto get = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  return {get("IIOTSEC_SEED"), get("IIOTSEC_MODE"), get("IIOTSEC_OUT"), get("IIOTSEC_SCENARIO")};
}

void apply_overrides(RunConfig& c, const Overrides& o) {
  if (o.seed) {
    std::uint64_t v = 0;
    const auto& s = *o.seed;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ConfigError("seed must be an unsigned integer");
    c.seed = v;
  }
  if (o.mode) c.mode = mode_from_name(*o.mode);
  if (o.out) c.out_dir = *o.out;
  if (o.scenario) c.scenario = *o.scenario;
}

}  // namespace iiotsec::cli
