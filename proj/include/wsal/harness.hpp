#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "wsal/classifier.hpp"
#include "wsal/dataset.hpp"
#include "wsal/prob.hpp"
#include "wsal/rng.hpp"
#include "wsal/sampler.hpp"
#include "wsal/strategies.hpp"

namespace wsal {

struct ExperimentConfig {
    std::size_t n0 = 100;
    std::size_t rounds = 30;
    std::size_t batch = 30;
    std::size_t trials = 5;
    StrategyConfig strategy;
    FitConfig fit;
    double holdout_fraction = 0.25;
    std::uint64_t master_seed = 0;
    /// Ids that may be queried later but are never part of the initial labeled set.
    std::vector<ItemId> init_exclude;

    void validate() const;
};

/// Labeled / pool / holdout partition of dataset ids [0, n).
class SplitState {
public:
    enum class Role : std::uint8_t { Pool, Labeled, Holdout };

    SplitState(std::size_t n, std::span<const ItemId> holdout, std::span<const ItemId> labeled);

    Role role(ItemId id) const { return roles_.at(id); }
    std::size_t size() const noexcept { return roles_.size(); }
    std::size_t labeled_count() const noexcept { return labeled_.size(); }

    /// Ascending ids per role.
    std::vector<ItemId> pool_ids() const;
    std::vector<ItemId> holdout_ids() const;
    /// Labeled ids in insertion order (initial set first, then queries).
    const std::vector<ItemId>& labeled_ids() const noexcept { return labeled_; }

    /// Moves a pool id to the labeled set; throws if the id is not in the pool.
    void reveal(ItemId id);

    /// Throws Runtime if the three role sets are not a partition consistent with labeled_ids().
    void check_invariants() const;

private:
    std::vector<Role> roles_;
    std::vector<ItemId> labeled_;
};

struct RoundRecord {
    std::size_t trial = 0;
    std::size_t round = 0;
    std::vector<ItemId> selected_ids;
    std::size_t labeled_count = 0;
    double holdout_accuracy = 0.0;
    std::int64_t elapsed_ms = 0;
};

struct ExperimentResult {
    std::vector<RoundRecord> records;
    std::vector<double> final_accuracies;
    double final_accuracy_mean = 0.0;
    /// Sample standard deviation (divisor trials - 1); 0 when trials == 1.
    double final_accuracy_std = 0.0;
    bool std_defined = false;
};

using RoundObserver = std::function<void(const RoundRecord&, const SplitState&)>;

/// Equal-prevalence initial labeled set: floor(n0/k) uniform draws per class,
/// the n0 mod k leftover slots go one each to classes 0, 1, ...
/// Only `candidates` are eligible. Result is sorted ascending.
std::vector<ItemId> biased_init(std::span<const int> labels, std::span<const ItemId> candidates, std::size_t n0,
                                int k, Rng& rng);
std::vector<ItemId> biased_init(std::span<const int> labels, std::size_t n0, int k, Rng& rng);

/// Hold-out ids derived from the master seed alone, shared by every trial and strategy.
std::vector<ItemId> holdout_split(std::size_t n, double fraction, std::uint64_t master_seed);

std::vector<RoundRecord> run_trial(const Dataset& dataset, const ExperimentConfig& cfg, std::size_t trial_index,
                                   const RoundObserver& observer = {});

ExperimentResult run_experiment(const Dataset& dataset, const ExperimentConfig& cfg);

struct SynthPocketSpec {
    std::size_t n = 5000;
    std::size_t d = 10;
    int k = 2;
    double beta = 0.1;
    std::vector<double> train_prevalence;  // empty = uniform
    std::vector<double> pool_prevalence;   // empty = uniform
    int pocket_class = 1;
    double separation = 6.0;
    std::uint64_t seed = 0;
    /// When nonzero, every prevalence entry must be >= chi_floor.
    double chi_floor = 0.0;

    void validate() const;
};

struct PocketDataset {
    Dataset dataset;
    std::vector<ItemId> pocket_ids;
};

/// Unit-variance Gaussian clusters, one per class at pairwise distance
/// `separation`, plus a pocket sub-cluster of pocket_class placed inside the
/// region of the neighbouring class (pocket_class + 1) mod k and displaced
/// along a feature axis no class uses. A model fit without pocket labels
/// assigns the pocket to the neighbour with high confidence.
PocketDataset generate_pocket_dataset(const SynthPocketSpec& spec);

/// Writes the pocket-id manifest (JSON).
void save_pocket_manifest(const PocketDataset& pd, const SynthPocketSpec& spec, const std::filesystem::path& path);
/// Reads the "pocket_ids" array of a pocket manifest.
std::vector<ItemId> load_pocket_ids(const std::filesystem::path& path);

enum class LemmaWeighting {
    WorstCase,  // pocket at the zeta floor, everything else at ln k
    Equal,
};

struct LemmaValidation {
    LemmaBoundReport bound;
    std::size_t pocket_size = 0;
    std::size_t repeats = 0;
    std::size_t hits = 0;
    double hit_rate = 0.0;
    double target = 0.0;        // 1 - delta
    double standard_error = 0.0;  // sqrt(target (1 - target) / repeats)
};

/// Empirical check of the pocket-hitting guarantee: `repeats` independent
/// weighted draws of n_s items each from a pool of spec.n with a
/// round(beta n) pocket.
LemmaValidation validate_lemma(const SynthPocketSpec& spec, double chi, double delta, std::size_t repeats,
                               LemmaWeighting weighting = LemmaWeighting::WorstCase);

} // namespace wsal
