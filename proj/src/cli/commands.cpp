#include "iiotsec/cli/commands.hpp"

#include <fstream>
#include <ostream>

#include "iiotsec/baselines/decision_tree.hpp"
#include "iiotsec/baselines/rsl_knn.hpp"
#include "iiotsec/common/error.hpp"
#include "iiotsec/dataset/synthetic.hpp"
#include "iiotsec/ledger/chain.hpp"

namespace iiotsec::cli {

namespace {

std::vector<dataset::RawRecord> pick(std::span<const dataset::RawRecord> all, std::span<const std::size_t> idx) {
  std::vector<dataset::RawRecord> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

void write_records(const std::filesystem::path& path, std::span<const dataset::RawRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  dataset::write_csv(out, records);
  if (!out) throw DataError("write failed: " + path.string());
}

std::filesystem::path model_file(const RunConfig& c) {
  return c.out_dir / ("model_" + std::string(mode_name(c.mode)) + ".json");
}

std::size_t label_for(const dataset::RawRecord& r, Mode mode) {
  return mode == Mode::Binary ? static_cast<std::size_t>(dataset::to_binary(r.label8))
                              : static_cast<std::size_t>(dataset::regroup_label(r.label8));
}

nn::ModelConfig model_config_for(const RunConfig& c, std::size_t input_length) {
  nn::ModelConfig m = c.model;
  m.input_length = input_length;
  m.output_units = c.mode == Mode::Binary ? 1 : 4;
  m.seed = c.required_seed();
  return m;
}

nn::ModelArtifact train_model(const RunConfig& c, const PreparedData& data, std::vector<nn::EpochTrace>* trace) {
  const auto train = to_samples(data.train, data.kept_indices, data.normalization, c.mode);
  const auto val = to_samples(data.validation, data.kept_indices, data.normalization, c.mode);
  auto result = nn::train(model_config_for(c, data.kept_indices.size()), train, val);
  if (trace) *trace = result.trace;
  return {std::move(result.model), data.kept_indices, data.normalization};
}

double accuracy_of(const nn::Predictor& predict, std::span<const nn::LabeledSample> test, std::size_t classes,
                   std::size_t threads) {
  return nn::compute_metrics(nn::confusion_of(predict, test, classes, threads)).accuracy;
}

}  // namespace

PreparedData prepare_data(const RunConfig& config) {
  config.validate();
  std::vector<dataset::RawRecord> records;
  if (config.dataset_path) {
    if (!std::filesystem::exists(*config.dataset_path))
      throw DataError("dataset not found: " + config.dataset_path->string());
    records = dataset::load_records(*config.dataset_path, dataset::format_from_path(*config.dataset_path));
  } else {
    records = dataset::synthesize_dataset(*config.synthetic, config.required_seed());
  }
  if (records.empty()) throw DataError("data set has no records");

  PreparedData out;
  out.kept_indices = dataset::drop_constant_features(records).kept_indices;
  const auto parts = dataset::split(records, config.split, config.required_seed());
  out.train = pick(records, parts.train);
  out.validation = pick(records, parts.validation);
  out.test = pick(records, parts.test);

  std::vector<std::vector<double>> rows;
  rows.reserve(out.train.size());
  for (const auto& r : out.train) rows.push_back(dataset::select_features(r.features, out.kept_indices));
  out.normalization = dataset::fit_minmax(rows);
  return out;
}

std::vector<nn::LabeledSample> to_samples(std::span<const dataset::RawRecord> records,
                                         std::span<const std::size_t> kept_indices,
                                         const dataset::NormalizationParams& norm, Mode mode) {
  const dataset::MinMaxScaler scaler(norm);
  std::vector<nn::LabeledSample> out;
  out.reserve(records.size());
  for (const auto& r : records)
    out.push_back({scaler.transform(dataset::select_features(r.features, kept_indices)), label_for(r, mode)});
  return out;
}

std::vector<std::string> class_names(Mode mode) {
  if (mode == Mode::Binary)
    return {std::string(dataset::label_name(dataset::BinaryLabel::Normal)),
            std::string(dataset::label_name(dataset::BinaryLabel::Attack))};
  std::vector<std::string> names;
  for (int i = 0; i < 4; ++i) names.emplace_back(dataset::label_name(*dataset::label4_from_int(i)));
  return names;
}

PreparedData cmd_prepare(const RunConfig& config) {
  PreparedData data = prepare_data(config);
  std::filesystem::create_directories(config.out_dir);
  write_records(config.out_dir / "train.csv", data.train);
  write_records(config.out_dir / "validation.csv", data.validation);
  write_records(config.out_dir / "test.csv", data.test);
  nn::write_json_file(config.out_dir / "normalization.json",
                      dataset::normalization_to_json(data.kept_indices, data.normalization));
  return data;
}

TrainOutput cmd_train(const RunConfig& config) {
  const PreparedData data = prepare_data(config);
  const auto model_path = model_file(config);
  const auto epochs_path = config.out_dir / ("epochs_" + std::string(mode_name(config.mode)) + ".csv");
  std::vector<nn::EpochTrace> trace;
  nn::ModelArtifact artifact = train_model(config, data, &trace);
  std::filesystem::create_directories(config.out_dir);
  nn::save_artifact(model_path, artifact);
  write_text(epochs_path, report::epoch_csv(trace));
  return {std::move(artifact), std::move(trace), model_path, epochs_path};
}

nn::MetricsReport cmd_eval(const RunConfig& config) {
  const auto path = config.model_path.value_or(model_file(config));
  if (!std::filesystem::exists(path)) throw DataError("model file not found: " + path.string());
  const nn::ModelArtifact artifact = nn::load_artifact(path);
  const PreparedData data = prepare_data(config);
  if (artifact.kept_indices != data.kept_indices)
    throw DataError("model expects " + std::to_string(artifact.kept_indices.size()) +
                    " selected features that do not match the data set's " +
                    std::to_string(data.kept_indices.size()));
  const bool binary = artifact.model.config().binary();
  if (binary != (config.mode == Mode::Binary))
    throw ConfigError("model head does not match --mode " + std::string(mode_name(config.mode)));
  // The model's own normalization is applied, as at deployment.
  const auto test = to_samples(data.test, artifact.kept_indices, artifact.normalization, config.mode);
  const auto metrics = nn::evaluate(artifact.model, test, config.threads);
  const auto names = class_names(config.mode);
  const std::string m(mode_name(config.mode));
  std::filesystem::create_directories(config.out_dir);
  write_text(config.out_dir / ("metrics_" + m + ".csv"), report::metrics_csv(metrics, names));
  write_text(config.out_dir / ("confusion_" + m + ".csv"), report::confusion_csv(metrics.confusion, names));
  nn::write_json_file(config.out_dir / ("metrics_" + m + ".json"), report::metrics_json(metrics, names));
  return metrics;
}

report::ComparisonTable cmd_compare(const RunConfig& config) {
  const PreparedData data = prepare_data(config);
  struct Row {
    std::string name;
    double acc[2] = {0.0, 0.0};
  };
  std::vector<Row> rows{{"1D-CNN"}, {"DT"}};
  for (auto k : config.knn_k) rows.push_back({"RSL-KNN (K=" + std::to_string(k) + ")"});

  for (Mode mode : {Mode::Binary, Mode::Multiclass}) {
    RunConfig c = config;
    c.mode = mode;
    const std::size_t m = mode == Mode::Binary ? 0 : 1;
    const std::size_t classes = mode == Mode::Binary ? 2 : 4;
    const auto train = to_samples(data.train, data.kept_indices, data.normalization, mode);
    const auto test = to_samples(data.test, data.kept_indices, data.normalization, mode);

    const auto cnn = train_model(c, data, nullptr);
    rows[0].acc[m] = nn::evaluate(cnn.model, test, config.threads).accuracy;

    const auto tree = baselines::dt_fit(train, classes, config.decision_tree);
    rows[1].acc[m] = accuracy_of([&](std::span<const double> x) { return tree.predict(x); }, test, classes,
                                 config.threads);

    for (std::size_t i = 0; i < config.knn_k.size(); ++i) {
      baselines::RslKnnParams p;
      p.k = config.knn_k[i];
      p.n_subspaces = config.knn_subspaces;
      p.subspace_dim = std::min(config.knn_subspace_dim, data.kept_indices.size());
      p.seed = config.required_seed();
      const auto knn = baselines::rsl_knn_fit(train, classes, p);
      rows[2 + i].acc[m] = accuracy_of([&](std::span<const double> x) { return knn.predict(x); }, test, classes,
                                       config.threads);
    }
  }

  report::ComparisonTable table;
  for (const auto& r : rows) table.add({r.name, r.acc[0], r.acc[1]});
  std::filesystem::create_directories(config.out_dir);
  write_text(config.out_dir / "comparison.csv", report::comparison_csv(table));
  nn::write_json_file(config.out_dir / "comparison.json", report::comparison_json(table));
  return table;
}

std::filesystem::path resolve_scenario(const std::string& name_or_path) {
  const std::filesystem::path direct(name_or_path);
  if (std::filesystem::is_regular_file(direct)) return direct;
  const auto bundled = std::filesystem::path(IIOTSEC_SCENARIO_DIR) / (name_or_path + ".json");
  if (std::filesystem::is_regular_file(bundled)) return bundled;
  throw ConfigError("no scenario named or at '" + name_or_path + "'");
}

SimulateOutput cmd_simulate(const RunConfig& config) {
  const auto script = scenario::load_scenario(resolve_scenario(config.scenario));
  const PreparedData data = prepare_data(config);

  nn::ModelArtifact artifact = [&] {
    if (config.model_path) return nn::load_artifact(*config.model_path);
    if (std::filesystem::exists(model_file(config))) return nn::load_artifact(model_file(config));
    return train_model(config, data, nullptr);
  }();

  SimulateOutput out;
  out.dir = config.out_dir / "simulate" / script.name;
  std::filesystem::remove_all(out.dir);
  std::filesystem::create_directories(out.dir);

  sdn::Simulation sim(script.topology.value_or(sdn::TopologySpec::default_topology()));
  sim.controller().ids().load(std::make_shared<sdn::CnnPayloadClassifier>(std::move(artifact)));
  sim.set_ledger_file(out.dir / "ledger.jsonl");

  attack::PayloadPool pool(data.test, config.required_seed());
  scenario::Environment env{&pool, out.dir};
  out.outcome = scenario::run_scenario(sim, script, env);

  sim.trace().write_jsonl(out.dir / "trace.jsonl");
  out.summary = report::summarize(sim.trace());
  nn::write_json_file(out.dir / "scenario_report.json", report::scenario_report_json(out.summary));
  return out;
}

int run_command(const std::string& command, const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (command == "prepare") {
      const auto d = cmd_prepare(config);
      out << "prepared " << d.train.size() << "/" << d.validation.size() << "/" << d.test.size()
          << " records, " << d.kept_indices.size() << " features kept -> " << config.out_dir.string() << "\n";
    } else if (command == "train") {
      const auto t = cmd_train(config);
      out << "trained " << mode_name(config.mode) << " model over " << t.trace.size() << " epochs";
      if (!t.trace.empty()) out << ", final val_acc " << report::format_percent(t.trace.back().val_accuracy) << "%";
      out << " -> " << t.model_file.string() << "\n";
    } else if (command == "eval") {
      const auto m = cmd_eval(config);
      out << report::metrics_csv(m, class_names(config.mode));
    } else if (command == "compare") {
      out << report::comparison_csv(cmd_compare(config));
    } else if (command == "simulate") {
      const auto s = cmd_simulate(config);
      out << report::scenario_report_json(s.summary).dump(2) << "\n";
      if (!s.outcome.expectations_met()) {
        for (const auto& f : s.outcome.failed_expectations) err << "expectation failed: " << f << "\n";
        return kExitDetection;
      }
    } else {
      err << "unknown command '" << command << "'\n";
      return kExitUsage;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace iiotsec::cli
