#include "attnlab/attention/trainer.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "attnlab/core/adam.hpp"
#include "attnlab/core/error.hpp"

namespace attnlab::attention {

void validate(const Dataset& data, const char* what) {
  if (data.x.rows() == 0) throw DegenerateInputError(std::string(what) + ": empty data set");
  if (static_cast<Index>(data.y.size()) != data.x.rows()) {
    throw DimensionError(std::string(what) + ": " + std::to_string(data.y.size()) + " labels for " +
                         std::to_string(data.x.rows()) + " points");
  }
}

void validate(const TrainConfig& config) {
  if (!(config.lr > 0)) throw ParameterError("train: lr must be positive");
  if (!(config.weight_decay >= 0)) throw ParameterError("train: weight_decay must be nonnegative");
  if (config.epochs < 1) throw ParameterError("train: epochs must be >= 1");
  if (config.eval_every < 1) throw ParameterError("train: eval_every must be >= 1");
}

double loss(const IPNModel& model, const Dataset& data) {
  validate(data, "loss");
  ad::Tape tape;
  std::vector<ad::Var> leaves;
  for (const Matrix& p : parameter_values(model)) leaves.push_back(tape.constant(p));
  return ad::cross_entropy(ipn_forward(tape, model, data.x, leaves), data.y).value()(0, 0);
}

double evaluate(const IPNModel& model, const Dataset& data) {
  validate(data, "evaluate");
  const auto pred = predict(model, data.x);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == data.y[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

TrainHistory train_ipn(IPNModel& model, const Dataset& train, const Dataset& test,
                       const TrainConfig& config) {
  validate(config);
  validate(train, "train");
  validate(test, "test");
  validate(model);
  auto params = parameters(model);
  std::vector<Matrix*> targets;
  for (auto& p : params) targets.push_back(p.value);
  AdamState state;
  TrainHistory history;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    ad::Tape tape;
    std::vector<ad::Var> leaves;
    for (auto* p : targets) leaves.push_back(tape.parameter(*p));
    ad::Var l = ad::cross_entropy(ipn_forward(tape, model, train.x, leaves), train.y);
    const double value = l.value()(0, 0);
    if (!std::isfinite(value)) {
      std::ostringstream msg;
      msg << "train: non-finite loss at epoch " << epoch << "; parameter norms:";
      for (const auto& p : params) msg << ' ' << p.name << '=' << p.value->norm();
      throw DomainError(msg.str());
    }
    tape.backward(l);
    std::vector<Matrix> grads;
    grads.reserve(leaves.size());
    for (const auto& v : leaves) grads.push_back(v.grad());
    adam_update(targets, grads, state, config.lr, config.weight_decay);
    if (epoch % config.eval_every == 0 || epoch == config.epochs)
      history.rows.push_back({epoch, value, evaluate(model, test)});
  }
  return history;
}

}  // namespace attnlab::attention
