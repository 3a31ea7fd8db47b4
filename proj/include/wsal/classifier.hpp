#pragma once

#include <span>
#include <vector>

#include "wsal/matrix.hpp"
#include "wsal/prob.hpp"

namespace wsal {

struct FitConfig {
    double l2_reg = 1e-4;
    int max_iters = 500;
    double learning_rate = 0.5;
    double tol = 1e-6;
};

/// Multinomial logistic regression. weights is k x (d + 1); the last column is the bias.
struct ModelParams {
    Matrix weights;

    std::size_t classes() const noexcept { return weights.rows(); }
    std::size_t dim() const noexcept { return weights.cols() == 0 ? 0 : weights.cols() - 1; }

    static ModelParams zeros(std::size_t k, std::size_t d) { return {Matrix(k, d + 1)}; }
};

/// Regularized mean cross-entropy and its gradient (same shape as weights).
/// The bias column is not penalized.
struct LossAndGradient {
    double loss = 0.0;
    Matrix gradient;
};

LossAndGradient loss_and_gradient(const ModelParams& params, const Matrix& features,
                                  std::span<const int> labels, double l2_reg);

/// Observer for per-iteration training loss; used by tests.
using LossTrace = std::vector<double>;

/// Full-batch gradient descent from zero weights. Stops after max_iters or
/// once the gradient infinity-norm drops below tol.
ModelParams fit(const Matrix& features, std::span<const int> labels, int k, const FitConfig& cfg,
                LossTrace* trace = nullptr);

ProbVector predict_proba(const ModelParams& params, std::span<const double> x);

/// Index of the largest probability; ties go to the smallest class index.
int predict(const ModelParams& params, std::span<const double> x);

double accuracy(const ModelParams& params, const Matrix& features, std::span<const int> labels);

} // namespace wsal
