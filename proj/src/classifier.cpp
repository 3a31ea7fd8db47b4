#include "wsal/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsal/error.hpp"

namespace wsal {
namespace {

// Per-class scores w_c . [x; 1] followed by a max-subtracted softmax.
// Returns log-sum-exp of the scores.
double softmax_into(const Matrix& w, std::span<const double> x, std::span<double> probs) {
    const std::size_t k = w.rows();
    const std::size_t d = x.size();
    double top = -INFINITY;
    for (std::size_t c = 0; c < k; ++c) {
        const auto wc = w.row(c);
        double s = wc[d];
        for (std::size_t j = 0; j < d; ++j) s += wc[j] * x[j];
        probs[c] = s;
        top = std::max(top, s);
    }
    double z = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        probs[c] = std::exp(probs[c] - top);
        z += probs[c];
    }
    for (std::size_t c = 0; c < k; ++c) probs[c] /= z;
    return top + std::log(z);
}

void check_labels(std::span<const int> labels, std::size_t n, std::size_t k) {
    if (labels.size() != n) fail(ErrorKind::DimensionMismatch, "label count does not match feature rows");
    for (int y : labels) {
        require(y >= 0 && static_cast<std::size_t>(y) < k, "label " + std::to_string(y) + " outside [0, k)");
    }
}

} // namespace

LossAndGradient loss_and_gradient(const ModelParams& params, const Matrix& features,
                                  std::span<const int> labels, double l2_reg) {
    const Matrix& w = params.weights;
    const std::size_t n = features.rows();
    const std::size_t d = features.cols();
    const std::size_t k = w.rows();
    if (d != params.dim()) fail(ErrorKind::DimensionMismatch, "feature width does not match model");
    require(n >= 1, "need at least one training row");
    check_labels(labels, n, k);

    LossAndGradient out{0.0, Matrix(k, d + 1)};
    std::vector<double> probs(k);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = features.row(i);
        const double lse = softmax_into(w, x, probs);
        const std::size_t y = static_cast<std::size_t>(labels[i]);
        const auto wy = w.row(y);
        double score_y = wy[d];
        for (std::size_t j = 0; j < d; ++j) score_y += wy[j] * x[j];
        out.loss += (lse - score_y) * inv_n;
        for (std::size_t c = 0; c < k; ++c) {
            const double err = (probs[c] - (c == y ? 1.0 : 0.0)) * inv_n;
            auto g = out.gradient.row(c);
            for (std::size_t j = 0; j < d; ++j) g[j] += err * x[j];
            g[d] += err;
        }
    }
    if (l2_reg > 0.0) {
        double penalty = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const auto wc = w.row(c);
            auto g = out.gradient.row(c);
            for (std::size_t j = 0; j < d; ++j) {
                penalty += wc[j] * wc[j];
                g[j] += l2_reg * wc[j];
            }
        }
        out.loss += 0.5 * l2_reg * penalty;
    }
    return out;
}

ModelParams fit(const Matrix& features, std::span<const int> labels, int k, const FitConfig& cfg,
                LossTrace* trace) {
    require(k >= 2, "class count must be >= 2");
    require(cfg.l2_reg >= 0.0, "l2_reg must be >= 0");
    require(cfg.max_iters >= 1, "max_iters must be >= 1");
    require(cfg.learning_rate > 0.0, "learning_rate must be > 0");
    require(cfg.tol > 0.0, "tol must be > 0");

    ModelParams params = ModelParams::zeros(static_cast<std::size_t>(k), features.cols());
    for (int it = 0; it < cfg.max_iters; ++it) {
        const LossAndGradient lg = loss_and_gradient(params, features, labels, cfg.l2_reg);
        if (!std::isfinite(lg.loss)) {
            fail(ErrorKind::NonFiniteLoss,
                 "training loss became non-finite at iteration " + std::to_string(it) +
                     "; lower learning_rate");
        }
        if (trace) trace->push_back(lg.loss);
        double gmax = 0.0;
        for (double g : lg.gradient.data()) gmax = std::max(gmax, std::abs(g));
        if (gmax < cfg.tol) break;
        auto w = params.weights.data();
        const auto g = lg.gradient.data();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= cfg.learning_rate * g[i];
    }
    return params;
}

ProbVector predict_proba(const ModelParams& params, std::span<const double> x) {
    if (x.size() != params.dim()) {
        fail(ErrorKind::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                               " features, model expects " + std::to_string(params.dim()));
    }
    std::vector<double> probs(params.classes());
    softmax_into(params.weights, x, probs);
    return ProbVector(std::move(probs));
}

int predict(const ModelParams& params, std::span<const double> x) {
    const ProbVector p = predict_proba(params, x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < p.size(); ++c) {
        if (p[c] > p[best]) best = c;
    }
    return static_cast<int>(best);
}

double accuracy(const ModelParams& params, const Matrix& features, std::span<const int> labels) {
    if (features.rows() == 0) fail(ErrorKind::InvalidArgument, "accuracy of an empty dataset is undefined");
    if (labels.size() != features.rows()) fail(ErrorKind::DimensionMismatch, "label count does not match rows");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < features.rows(); ++i) {
        if (predict(params, features.row(i)) == labels[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(features.rows());
}

} // namespace wsal
