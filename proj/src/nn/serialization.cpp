#include "iiotsec/nn/serialization.hpp"

#include <fstream>

#include "iiotsec/common/error.hpp"
#include "iiotsec/common/model_envelope.hpp"

namespace iiotsec::nn {

std::vector<double> ModelArtifact::preprocess(std::span<const double> raw) const {
  const auto selected = dataset::select_features(raw, kept_indices);
  return dataset::MinMaxScaler(normalization).transform(selected);
}

nlohmann::json artifact_to_json(const ModelArtifact& a) {
  nlohmann::json doc = make_model_envelope("cnn");
  doc["config"] = model_config_to_json(a.model.config());
  doc["kept_indices"] = a.kept_indices;
  doc["normalization"] = {{"mins", a.normalization.mins}, {"maxs", a.normalization.maxs}};
  nlohmann::json layers = nlohmann::json::object();
  for (std::size_t i = 0; i < kParamCount; ++i) {
    const Tensor& t = a.model.parameters()[i];
    layers[param_name(static_cast<Param>(i))] = {{"shape", t.shape()}, {"values", t.data()}};
  }
  doc["layers"] = std::move(layers);
  return doc;
}

ModelArtifact artifact_from_json(const nlohmann::json& doc) {
  check_model_envelope(doc, "cnn");
  try {
    const ModelConfig config = model_config_from_json(doc.at("config"));
    ParameterSet params;
    for (std::size_t i = 0; i < kParamCount; ++i) {
      const auto& layer = doc.at("layers").at(param_name(static_cast<Param>(i)));
      params[i] = Tensor(layer.at("shape").get<std::vector<std::size_t>>(),
                         layer.at("values").get<std::vector<double>>());
    }
    ModelArtifact a{CnnModel(config, std::move(params)), doc.at("kept_indices").get<std::vector<std::size_t>>(),
                    {doc.at("normalization").at("mins").get<std::vector<double>>(),
                     doc.at("normalization").at("maxs").get<std::vector<double>>()}};
    if (a.kept_indices.size() != config.input_length || a.normalization.size() != config.input_length ||
        a.normalization.maxs.size() != config.input_length)
      throw DataError("model file: kept_indices/normalization length does not match input_length");
    dataset::MinMaxScaler validate(a.normalization);
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(std::string("model file has an invalid config: ") + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc.dump() << '\n';
  if (!out) throw DataError("write failed: " + path.string());
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": invalid JSON: " + e.what());
  }
}

void save_artifact(const std::filesystem::path& path, const ModelArtifact& artifact) {
  write_json_file(path, artifact_to_json(artifact));
}

ModelArtifact load_artifact(const std::filesystem::path& path) { return artifact_from_json(read_json_file(path)); }

}  // namespace iiotsec::nn
