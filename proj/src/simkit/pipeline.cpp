#include "attnlab/simkit/pipeline.hpp"

#include <string>

#include "attnlab/core/error.hpp"
#include "attnlab/core/json_io.hpp"

namespace attnlab::simkit {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vector broadcast_rows(const Vector& eps, Index rows) {
  if (eps.size() == 1) return Vector::Constant(rows, eps(0));
  return eps;
}

Vector scalar_or_vector(const nlohmann::json& j) {
  if (j.is_number()) return Vector::Constant(1, j.get<double>());
  return vector_from_json(j);
}

nlohmann::json compact_vector(const Vector& v) {
  if (v.size() == 1) return v(0);
  return vector_to_json(v);
}

}  // namespace

bool is_init_stage(const Stage& stage) {
  return std::holds_alternative<MetricInit>(stage) || std::holds_alternative<QkInit>(stage) ||
         std::holds_alternative<LocalCombinationInit>(stage) ||
         std::holds_alternative<AdjacencyPowerInit>(stage);
}

void validate(const PipelineSpec& spec) {
  if (spec.stages.empty()) throw ParameterError("pipeline: no stages");
  if (!is_init_stage(spec.stages.front())) {
    throw ParameterError("pipeline: the first stage must initialise the similarity");
  }
  for (std::size_t s = 1; s < spec.stages.size(); ++s) {
    if (is_init_stage(spec.stages[s])) {
      throw ParameterError("pipeline: stage " + std::to_string(s) +
                           " is a second initialisation stage");
    }
  }
}

Matrix apply_stage(const Stage& stage, const Matrix& current, const PipelineInput& input) {
  return std::visit(
      Overloaded{
          [&](const MetricInit& s) -> Matrix {
            const Matrix dist =
                input.distances ? *input.distances : euclidean_distances(input.points);
            const Vector c = s.c.size() == 0   ? Vector::Zero(dist.rows())
                             : s.c.size() == 1 ? Vector::Constant(dist.rows(), s.c(0))
                                               : s.c;
            return metric_similarity(dist, c, s.t);
          },
          [&](const QkInit& s) -> Matrix { return qk_dot_similarity(input.points, s.q, s.k); },
          [&](const LocalCombinationInit& s) -> Matrix {
            return local_combination_matrix(input.points,
                                            nearest_neighbors(input.points, s.neighbors));
          },
          [&](const AdjacencyPowerInit& s) -> Matrix {
            if (!input.adjacency) throw ParameterError("adjacency-power-init: no adjacency given");
            return adjacency_power(*input.adjacency, s.k);
          },
          [&](const InflatePower& s) -> Matrix { return inflate(current, PowerInflation{s.r}); },
          [&](const InflateExp& s) -> Matrix {
            return inflate(current, ExpInflation{broadcast_rows(s.eps, current.rows())});
          },
          [&](const Normalize& s) -> Matrix { return normalize(current, s.mode); },
      },
      stage);
}

Matrix run_pipeline(const PipelineSpec& spec, const PipelineInput& input) {
  validate(spec);
  Matrix current;
  for (const Stage& stage : spec.stages) current = apply_stage(stage, current, input);
  return current;
}

PipelineSpec diffusion_map_pipeline(double eps) {
  PipelineSpec spec;
  spec.stages.push_back(MetricInit{2.0, Vector()});
  spec.stages.push_back(InflateExp{Vector::Constant(1, eps)});
  spec.stages.push_back(Normalize{NormalizeMode::kTwoSide});
  spec.stages.push_back(Normalize{NormalizeMode::kRow});
  return spec;
}

std::string normalize_mode_name(NormalizeMode mode) {
  switch (mode) {
    case NormalizeMode::kRow: return "row";
    case NormalizeMode::kColumn: return "col";
    case NormalizeMode::kTwoSide: return "two-side";
    case NormalizeMode::kGlobal: return "global";
  }
  return "row";
}

NormalizeMode parse_normalize_mode(const std::string& name) {
  if (name == "row") return NormalizeMode::kRow;
  if (name == "col") return NormalizeMode::kColumn;
  if (name == "two-side") return NormalizeMode::kTwoSide;
  if (name == "global") return NormalizeMode::kGlobal;
  throw FormatError("unknown normalisation mode '" + name + "'");
}

nlohmann::json to_json(const PipelineSpec& spec) {
  nlohmann::json stages = nlohmann::json::array();
  for (const Stage& stage : spec.stages) {
    stages.push_back(std::visit(
        Overloaded{
            [](const MetricInit& s) {
              nlohmann::json j{{"stage", "metric-init"}, {"t", s.t}};
              if (s.c.size() > 0) j["c"] = compact_vector(s.c);
              return j;
            },
            [](const QkInit& s) {
              return nlohmann::json{
                  {"stage", "qk-init"}, {"q", matrix_to_json(s.q)}, {"k", matrix_to_json(s.k)}};
            },
            [](const LocalCombinationInit& s) {
              return nlohmann::json{{"stage", "local-combination-init"}, {"neighbors", s.neighbors}};
            },
            [](const AdjacencyPowerInit& s) {
              return nlohmann::json{{"stage", "adjacency-power-init"}, {"k", s.k}};
            },
            [](const InflatePower& s) { return nlohmann::json{{"stage", "inflate-power"}, {"r", s.r}}; },
            [](const InflateExp& s) {
              return nlohmann::json{{"stage", "inflate-exp"}, {"eps", compact_vector(s.eps)}};
            },
            [](const Normalize& s) {
              return nlohmann::json{{"stage", "normalize"}, {"mode", normalize_mode_name(s.mode)}};
            },
        },
        stage));
  }
  return nlohmann::json{{"stages", stages}};
}

PipelineSpec pipeline_from_json(const nlohmann::json& j) {
  PipelineSpec spec;
  for (const auto& s : j.at("stages")) {
    const std::string kind = s.at("stage").get<std::string>();
    if (kind == "metric-init") {
      MetricInit init{s.at("t").get<double>(), Vector()};
      if (s.contains("c")) init.c = scalar_or_vector(s.at("c"));
      spec.stages.emplace_back(std::move(init));
    } else if (kind == "qk-init") {
      spec.stages.emplace_back(QkInit{matrix_from_json(s.at("q")), matrix_from_json(s.at("k"))});
    } else if (kind == "local-combination-init") {
      spec.stages.emplace_back(LocalCombinationInit{s.at("neighbors").get<Index>()});
    } else if (kind == "adjacency-power-init") {
      spec.stages.emplace_back(AdjacencyPowerInit{s.at("k").get<int>()});
    } else if (kind == "inflate-power") {
      spec.stages.emplace_back(InflatePower{s.at("r").get<double>()});
    } else if (kind == "inflate-exp") {
      spec.stages.emplace_back(InflateExp{scalar_or_vector(s.at("eps"))});
    } else if (kind == "normalize") {
      spec.stages.emplace_back(Normalize{parse_normalize_mode(s.at("mode").get<std::string>())});
    } else {
      throw FormatError("unknown pipeline stage '" + kind + "'");
    }
  }
  validate(spec);
  return spec;
}

}  // namespace attnlab::simkit
