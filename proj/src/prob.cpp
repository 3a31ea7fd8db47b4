#include "wsal/prob.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wsal/error.hpp"

namespace wsal {

ProbVector::ProbVector(std::vector<double> values) : values_(std::move(values)) {
    require(values_.size() >= 2, "probability vector needs at least 2 classes");
    double sum = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i];
        require(std::isfinite(v) && v >= 0.0,
                "probability entry " + std::to_string(i) + " is negative or non-finite");
        sum += v;
    }
    require(std::abs(sum - 1.0) <= kProbSumTolerance,
            "probability entries sum to " + std::to_string(sum) + ", expected 1");
}

double ProbVector::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ProbVector::max() const { return *std::max_element(values_.begin(), values_.end()); }

double entropy(const ProbVector& p) {
    double h = 0.0;
    for (double v : p.values()) {
        if (v > 0.0) h -= v * std::log(v);
    }
    return h;
}

ProbVector smooth(const ProbVector& r, SmoothingConfig cfg) {
    require(cfg.chi > 0.0 && cfg.chi < 1.0, "chi must lie in (0, 1)");
    const double floor = cfg.chi / static_cast<double>(r.size());
    std::vector<double> v(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) v[i] = (1.0 - cfg.chi) * r[i] + floor;
    return ProbVector(std::move(v));
}

double lemma_eta(double chi) {
    require(chi > 0.0 && chi < 1.0, "chi must lie in (0, 1)");
    return -std::log(chi) / (1.0 - chi);
}

namespace {

// eta - 1 - ln(eta), zero at eta == 1 and positive otherwise.
double eta_correction(double eta) { return eta - 1.0 - std::log(eta); }

} // namespace

double entropy_lower_bound(double chi, int k) {
    require(k >= 2, "class count k must be >= 2");
    return std::log(static_cast<double>(k)) - eta_correction(lemma_eta(chi)) / std::numbers::ln2;
}

double ratio_entropy_bound(int k, double rho) {
    require(k >= 2, "class count k must be >= 2");
    require(rho >= 1.0 && std::isfinite(rho), "ratio bound rho must be >= 1");
    // rho ln rho / (rho - 1) -> 1 as rho -> 1
    const double t = rho == 1.0 ? 1.0 : rho * std::log(rho) / (rho - 1.0);
    return std::log(static_cast<double>(k)) - eta_correction(t) / std::numbers::ln2;
}

LemmaBoundReport lemma_quantities(const LemmaBoundInput& in) {
    require(in.beta > 0.0 && in.beta <= 1.0, "beta must lie in (0, 1]");
    require(in.chi > 0.0 && in.chi < 1.0, "chi must lie in (0, 1)");
    require(in.k >= 2, "k must be >= 2");
    require(in.delta > 0.0 && in.delta < 1.0, "delta must lie in (0, 1)");

    LemmaBoundReport rep;
    rep.eta = lemma_eta(in.chi);
    rep.zeta = entropy_lower_bound(in.chi, in.k);
    const double ln_k = std::log(static_cast<double>(in.k));
    rep.p_s = in.beta * (1.0 - eta_correction(rep.eta) / (std::numbers::ln2 * ln_k));
    if (rep.p_s > 0.0) {
        const double draws = std::log(in.delta) / std::log1p(-rep.p_s);
        rep.n_s = draws <= 0.0 ? 0 : static_cast<std::uint64_t>(std::ceil(draws));
    }
    return rep;
}

LemmaBoundReport lemma_bound(const LemmaBoundInput& in) {
    const LemmaBoundReport rep = lemma_quantities(in);
    if (!(rep.p_s > 0.0)) {
        fail(ErrorKind::VacuousBound,
             "vacuous bound: p_s = " + std::to_string(rep.p_s) + " <= 0 (zeta = " + std::to_string(rep.zeta) +
                 "); increase k or chi");
    }
    return rep;
}

} // namespace wsal
