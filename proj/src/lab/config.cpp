#include "attnlab/lab/config.hpp"

#include <fstream>
#include <sstream>

#include <rapidjson/document.h>
#include <rapidjson/schema.h>
#include <rapidjson/stringbuffer.h>

#include "attnlab/core/error.hpp"
#include "schema_text.hpp"

namespace attnlab::lab {

using nlohmann::json;

namespace {

template <typename T>
void read(const json& j, const char* key, T& field) {
  if (j.contains(key)) j.at(key).get_to(field);
}

void from_json(const json& j, DensityConfig& c) {
  read(j, "family", c.family);
  read(j, "a", c.a);
}

void from_json(const json& j, ManifoldConfig& c) {
  read(j, "shape", c.shape);
  read(j, "n", c.n);
  if (j.contains("density")) from_json(j.at("density"), c.density);
}

void from_json(const json& j, FieldConfig& c) {
  read(j, "name", c.name);
  read(j, "k", c.k);
  read(j, "constant", c.constant);
}

void from_json(const json& j, SweepConfig& c) {
  read(j, "n_values", c.n_values);
  read(j, "seeds", c.seeds);
}

void from_json(const json& j, PdeConfig& c) {
  read(j, "grid_size", c.grid_size);
  read(j, "t_end", c.t_end);
  read(j, "courant", c.courant);
}

void from_json(const json& j, ConformalConfig& c) {
  read(j, "manifold_dim", c.manifold_dim);
  read(j, "grid_size", c.grid_size);
  read(j, "mode", c.mode);
}

void from_json(const json& j, ArgminConfig& c) {
  read(j, "x", c.x);
  read(j, "a", c.a);
  read(j, "rotation", c.rotation);
  read(j, "directions", c.directions);
}

void from_json(const json& j, ClusteringConfig& c) {
  read(j, "rows", c.rows);
  read(j, "dim", c.dim);
  read(j, "feature_sd", c.feature_sd);
  read(j, "steps", c.steps);
  read(j, "clusters", c.clusters);
  read(j, "separation", c.separation);
  read(j, "eps", c.eps);
}

void from_json(const json& j, MoonsConfig& c) {
  read(j, "n_train", c.n_train);
  read(j, "n_test", c.n_test);
  read(j, "noise", c.noise);
}

void from_json(const json& j, ModelConfig& c) {
  read(j, "kind", c.kind);
  read(j, "hidden_dim", c.hidden_dim);
  read(j, "n_blocks", c.n_blocks);
  read(j, "mlp_width", c.mlp_width);
  read(j, "eps", c.eps);
}

void from_json(const json& j, TrainingConfig& c) {
  read(j, "lr", c.lr);
  read(j, "weight_decay", c.weight_decay);
  read(j, "epochs", c.epochs);
  read(j, "eval_every", c.eval_every);
}

void from_json(const json& j, ComparisonConfig& c) {
  read(j, "seeds", c.seeds);
  read(j, "kinds", c.kinds);
}

void from_json(const json& j, IdxConfig& c) {
  read(j, "images", c.images);
  read(j, "labels", c.labels);
}

template <typename T>
void section(const json& j, const char* key, T& c) {
  if (j.contains(key)) from_json(j.at(key), c);
}

bool is_report(const json& doc) {
  return doc.is_object() && doc.contains("kind") && doc.at("kind") == "attnlab-report" && doc.contains("config");
}

}  // namespace

const std::string& config_schema() {
  static const std::string text = generated::kExperimentSchema;
  return text;
}

void validate_config_json(const json& doc) {
  static const rapidjson::SchemaDocument schema = [] {
    rapidjson::Document d;
    d.Parse(config_schema().c_str());
    if (d.HasParseError()) throw std::logic_error("embedded experiment schema is not valid JSON");
    return rapidjson::SchemaDocument(d);
  }();
  rapidjson::Document d;
  const std::string text = doc.dump();
  d.Parse(text.c_str());
  rapidjson::SchemaValidator validator(schema);
  if (d.Accept(validator)) return;
  rapidjson::StringBuffer where, rule;
  validator.GetInvalidDocumentPointer().StringifyUriFragment(where);
  validator.GetInvalidSchemaPointer().StringifyUriFragment(rule);
  std::string location = where.GetString();
  if (location == "#") location = "# (document root)";
  throw FormatError("config: invalid at " + location + ", violates '" + validator.GetInvalidSchemaKeyword() +
                    "' (schema " + rule.GetString() + ")");
}

ExperimentConfig parse_config(const json& input) {
  const json& doc = is_report(input) ? input.at("config") : input;
  validate_config_json(doc);
  ExperimentConfig c;
  doc.at("experiment").get_to(c.experiment);
  read(doc, "seed", c.seed);
  read(doc, "out", c.out);
  read(doc, "eps", c.eps);
  read(doc, "eps_list", c.eps_list);
  read(doc, "metric", c.metric);
  section(doc, "manifold", c.manifold);
  section(doc, "field", c.field);
  section(doc, "sweep", c.sweep);
  section(doc, "pde", c.pde);
  section(doc, "conformal", c.conformal);
  section(doc, "argmin", c.argmin);
  section(doc, "clustering", c.clustering);
  section(doc, "moons", c.moons);
  section(doc, "model", c.model);
  section(doc, "training", c.training);
  section(doc, "comparison", c.comparison);
  section(doc, "idx", c.idx);
  if (doc.contains("assertions")) c.assertions = doc.at("assertions");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("config: cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("config: " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["experiment"] = c.experiment;
  j["seed"] = c.seed;
  if (!c.out.empty()) j["out"] = c.out;
  j["eps"] = c.eps;
  j["eps_list"] = c.eps_list;
  j["metric"] = c.metric;
  j["manifold"] = {{"shape", c.manifold.shape},
                   {"n", c.manifold.n},
                   {"density", {{"family", c.manifold.density.family}, {"a", c.manifold.density.a}}}};
  j["field"] = {{"name", c.field.name}, {"k", c.field.k}, {"constant", c.field.constant}};
  j["sweep"] = {{"n_values", c.sweep.n_values}, {"seeds", c.sweep.seeds}};
  j["pde"] = {{"grid_size", c.pde.grid_size}, {"t_end", c.pde.t_end}, {"courant", c.pde.courant}};
  j["conformal"] = {
      {"manifold_dim", c.conformal.manifold_dim}, {"grid_size", c.conformal.grid_size}, {"mode", c.conformal.mode}};
  j["argmin"] = {{"x", c.argmin.x}, {"a", c.argmin.a}, {"directions", c.argmin.directions}};
  if (!c.argmin.rotation.empty()) j["argmin"]["rotation"] = c.argmin.rotation;
  j["clustering"] = {{"rows", c.clustering.rows},         {"dim", c.clustering.dim},
                     {"feature_sd", c.clustering.feature_sd}, {"steps", c.clustering.steps},
                     {"clusters", c.clustering.clusters}, {"separation", c.clustering.separation},
                     {"eps", c.clustering.eps}};
  j["moons"] = {{"n_train", c.moons.n_train}, {"n_test", c.moons.n_test}, {"noise", c.moons.noise}};
  j["model"] = {{"kind", c.model.kind},     {"hidden_dim", c.model.hidden_dim}, {"n_blocks", c.model.n_blocks},
                {"mlp_width", c.model.mlp_width}, {"eps", c.model.eps}};
  j["training"] = {{"lr", c.training.lr},
                   {"weight_decay", c.training.weight_decay},
                   {"epochs", c.training.epochs},
                   {"eval_every", c.training.eval_every}};
  j["comparison"] = {{"seeds", c.comparison.seeds}, {"kinds", c.comparison.kinds}};
  j["idx"] = {{"images", c.idx.images}, {"labels", c.idx.labels}};
  j["assertions"] = c.assertions;
  return j;
}

double threshold(ExperimentConfig& config, const std::string& key, double fallback) {
  if (!config.assertions.contains(key)) config.assertions[key] = fallback;
  return config.assertions.at(key).get<double>();
}

}  // namespace attnlab::lab
