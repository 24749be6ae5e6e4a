#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "attnlab/attention/ipn.hpp"
#include "attnlab/core/types.hpp"

namespace attnlab::attention {

struct Dataset {
  Matrix x;
  std::vector<int> y;
};

void validate(const Dataset& data, const char* what);

struct TrainConfig {
  double lr = 1e-3;
  double weight_decay = 1e-4;
  int epochs = 1000;
  std::uint64_t seed = 0;
  int eval_every = 10;
};

void validate(const TrainConfig& config);

struct HistoryRow {
  int epoch = 0;
  double train_loss = 0.0;  ///< loss at the start of the epoch, before its update
  double test_acc = 0.0;    ///< after the update
};

struct TrainHistory {
  std::vector<HistoryRow> rows;
};

/// Mean cross-entropy of the model on the full data set as one token batch.
double loss(const IPNModel& model, const Dataset& data);

/// Fraction of argmax predictions equal to the labels; the data set is one token batch.
double evaluate(const IPNModel& model, const Dataset& data);

/// Full-batch Adam on cross-entropy. A row is recorded every eval_every epochs
/// and at the final epoch. Throws DomainError on a non-finite loss.
TrainHistory train_ipn(IPNModel& model, const Dataset& train, const Dataset& test,
                       const TrainConfig& config);

}  // namespace attnlab::attention
