#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wsal {

inline constexpr double kProbSumTolerance = 1e-9;

/// A discrete distribution over k >= 2 classes. Construction validates
/// non-negativity and that entries sum to 1 within kProbSumTolerance.
class ProbVector {
public:
    explicit ProbVector(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }

    double min() const;
    double max() const;

private:
    std::vector<double> values_;
};

/// Minimum per-class mass; must lie in (0, 1).
struct SmoothingConfig {
    double chi = 0.05;
};

/// Shannon entropy in nats with 0 ln 0 = 0.
double entropy(const ProbVector& p);

/// Uniform mixture (1 - chi) r + (chi / k) 1. Every entry is at least chi / k.
ProbVector smooth(const ProbVector& r, SmoothingConfig cfg);

/// eta = -ln(chi) / (1 - chi).
double lemma_eta(double chi);

/// Lower bound on the entropy of any distribution whose entries are all >= chi:
/// ln k - (eta - 1 - ln eta) / ln 2. May be negative, i.e. vacuous.
double entropy_lower_bound(double chi, int k);

/// Entropy floor for distributions with max/min ratio <= rho (rho >= 1).
double ratio_entropy_bound(int k, double rho);

/// beta is the pocket fraction in (0, 1]; delta the failure probability in (0, 1).
struct LemmaBoundInput {
    double beta = 0.1;
    double chi = 0.05;
    int k = 2;
    double delta = 0.05;
};

struct LemmaBoundReport {
    double eta = 0;
    double zeta = 0;
    double p_s = 0;
    std::uint64_t n_s = 0;
};

/// Per-draw hit probability p_s and draws n_s = ceil(ln delta / ln(1 - p_s))
/// needed to hit a beta-fraction pocket with probability >= 1 - delta.
/// Throws ErrorKind::VacuousBound when p_s <= 0.
LemmaBoundReport lemma_bound(const LemmaBoundInput& input);

/// Same quantities without the vacuity check; n_s is 0 when p_s <= 0.
LemmaBoundReport lemma_quantities(const LemmaBoundInput& input);

} // namespace wsal
