#include "attnlab/core/adam.hpp"

#include <cmath>
#include <string>

#include "attnlab/core/error.hpp"

namespace attnlab {

void adam_update(std::span<Matrix* const> params, std::span<const Matrix> grads,
                 AdamState& state, double lr, double weight_decay) {
  if (!(lr > 0)) throw ParameterError("adam_update: learning rate must be positive");
  if (!(weight_decay >= 0)) throw ParameterError("adam_update: weight decay must be nonnegative");
  if (params.size() != grads.size()) {
    throw DimensionError("adam_update: " + std::to_string(params.size()) + " parameters but " +
                         std::to_string(grads.size()) + " gradients");
  }
  if (state.m.empty()) {
    for (const Matrix* p : params) {
      state.m.push_back(Matrix::Zero(p->rows(), p->cols()));
      state.v.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  if (state.m.size() != params.size()) throw DimensionError("adam_update: state size mismatch");

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(AdamState::kBeta1, t);
  const double bias2 = 1.0 - std::pow(AdamState::kBeta2, t);

  for (std::size_t k = 0; k < params.size(); ++k) {
    Matrix& p = *params[k];
    const Matrix& g = grads[k];
    if (g.rows() != p.rows() || g.cols() != p.cols() || state.m[k].rows() != p.rows() ||
        state.m[k].cols() != p.cols()) {
      throw DimensionError("adam_update: parameter " + std::to_string(k) + " shape " +
                           shape_string(p.rows(), p.cols()) + " vs gradient " +
                           shape_string(g.rows(), g.cols()));
    }
    Matrix& m = state.m[k];
    Matrix& v = state.v[k];
    for (Index i = 0; i < p.rows(); ++i) {
      for (Index j = 0; j < p.cols(); ++j) {
        p(i, j) -= lr * weight_decay * p(i, j);
        m(i, j) = AdamState::kBeta1 * m(i, j) + (1.0 - AdamState::kBeta1) * g(i, j);
        v(i, j) = AdamState::kBeta2 * v(i, j) + (1.0 - AdamState::kBeta2) * g(i, j) * g(i, j);
        const double m_hat = m(i, j) / bias1;
        const double v_hat = v(i, j) / bias2;
        p(i, j) -= lr * m_hat / (std::sqrt(v_hat) + AdamState::kEpsilon);
      }
    }
  }
}

}  // namespace attnlab
