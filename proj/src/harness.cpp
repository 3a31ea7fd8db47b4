#include "wsal/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <string>

#include <json.hpp>
#include <numbers>

#include "wsal/error.hpp"

namespace wsal {
namespace {

// Sub-stream identifiers for derive_seed.
constexpr std::uint64_t kStreamHoldout = 1;
constexpr std::uint64_t kStreamInit = 2;
constexpr std::uint64_t kStreamSelect = 3;
constexpr std::uint64_t kStreamSynth = 4;
constexpr std::uint64_t kStreamLemma = 5;

void shuffle(std::vector<ItemId>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform_index(i));
        std::swap(v[i - 1], v[j]);
    }
}

// Integer class counts summing to total, by largest remainder (ties to lower index).
std::vector<std::size_t> allocate(std::size_t total, std::span<const double> weights) {
    std::vector<std::size_t> counts(weights.size());
    std::vector<std::pair<double, std::size_t>> rem;
    std::size_t used = 0;
    for (std::size_t c = 0; c < weights.size(); ++c) {
        const double exact = weights[c] * static_cast<double>(total);
        counts[c] = static_cast<std::size_t>(std::floor(exact));
        used += counts[c];
        rem.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; used < total; ++i, ++used) ++counts[rem[i % rem.size()].second];
    return counts;
}

std::vector<double> or_uniform(const std::vector<double>& p, int k) {
    if (!p.empty()) return p;
    return std::vector<double>(static_cast<std::size_t>(k), 1.0 / k);
}

void check_prevalence(const std::vector<double>& p, int k, double floor, const char* name) {
    require(p.size() == static_cast<std::size_t>(k), std::string(name) + " must have k entries");
    double sum = 0.0;
    for (double v : p) {
        require(v >= 0.0, std::string(name) + " entries must be >= 0");
        require(v >= floor, std::string(name) + " entry below the chi floor");
        sum += v;
    }
    require(std::abs(sum - 1.0) <= kProbSumTolerance, std::string(name) + " must sum to 1");
}

} // namespace

void ExperimentConfig::validate() const {
    strategy.validate();
    require(batch >= 1, "batch must be >= 1");
    require(trials >= 1, "trials must be >= 1");
    require(holdout_fraction > 0.0 && holdout_fraction < 1.0, "holdout_fraction must lie in (0, 1)");
    require(fit.max_iters >= 1 && fit.learning_rate > 0.0 && fit.tol > 0.0 && fit.l2_reg >= 0.0,
            "fit settings out of range");
}

SplitState::SplitState(std::size_t n, std::span<const ItemId> holdout, std::span<const ItemId> labeled)
    : roles_(n, Role::Pool) {
    for (ItemId id : holdout) {
        require(id < n, "holdout id out of range");
        roles_[id] = Role::Holdout;
    }
    for (ItemId id : labeled) {
        require(id < n && roles_[id] == Role::Pool, "initial labeled id is not a pool id");
        roles_[id] = Role::Labeled;
        labeled_.push_back(id);
    }
}

std::vector<ItemId> SplitState::pool_ids() const {
    std::vector<ItemId> out;
    for (std::size_t i = 0; i < roles_.size(); ++i)
        if (roles_[i] == Role::Pool) out.push_back(i);
    return out;
}

std::vector<ItemId> SplitState::holdout_ids() const {
    std::vector<ItemId> out;
    for (std::size_t i = 0; i < roles_.size(); ++i)
        if (roles_[i] == Role::Holdout) out.push_back(i);
    return out;
}

void SplitState::reveal(ItemId id) {
    if (id >= roles_.size() || roles_[id] != Role::Pool) {
        fail(ErrorKind::Runtime, "id " + std::to_string(id) + " is not in the unlabeled pool");
    }
    roles_[id] = Role::Labeled;
    labeled_.push_back(id);
}

void SplitState::check_invariants() const {
    std::size_t labeled = 0;
    for (Role r : roles_) labeled += r == Role::Labeled ? 1 : 0;
    if (labeled != labeled_.size()) fail(ErrorKind::Runtime, "labeled set size disagrees with role table");
    std::vector<ItemId> sorted = labeled_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        fail(ErrorKind::Runtime, "an id was labeled twice");
    for (ItemId id : labeled_)
        if (roles_[id] != Role::Labeled) fail(ErrorKind::Runtime, "labeled id has another role");
}

std::vector<ItemId> biased_init(std::span<const int> labels, std::span<const ItemId> candidates, std::size_t n0,
                                int k, Rng& rng) {
    require(k >= 1, "k must be >= 1");
    if (n0 == 0) return {};
    const std::size_t kk = static_cast<std::size_t>(k);
    std::vector<std::vector<ItemId>> by_class(kk);
    for (ItemId id : candidates) {
        const int y = labels[id];
        require(y >= 0 && y < k, "label outside [0, k)");
        by_class[static_cast<std::size_t>(y)].push_back(id);
    }
    const std::size_t base = n0 / kk;
    const std::size_t extra = n0 % kk;
    std::vector<ItemId> out;
    out.reserve(n0);
    for (std::size_t c = 0; c < kk; ++c) {
        const std::size_t quota = base + (c < extra ? 1 : 0);
        if (quota == 0) continue;
        if (by_class[c].size() < quota) {
            fail(ErrorKind::InsufficientClassInstances,
                 "class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                     " eligible instances, initial labeled set needs " + std::to_string(quota));
        }
        const auto picked = uniform_sample(by_class[c], quota, rng);
        out.insert(out.end(), picked.begin(), picked.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ItemId> biased_init(std::span<const int> labels, std::size_t n0, int k, Rng& rng) {
    std::vector<ItemId> all(labels.size());
    std::iota(all.begin(), all.end(), ItemId{0});
    return biased_init(labels, all, n0, k, rng);
}

std::vector<ItemId> holdout_split(std::size_t n, double fraction, std::uint64_t master_seed) {
    require(fraction > 0.0 && fraction < 1.0, "holdout_fraction must lie in (0, 1)");
    std::vector<ItemId> ids(n);
    std::iota(ids.begin(), ids.end(), ItemId{0});
    Rng rng(derive_seed(master_seed, kStreamHoldout));
    shuffle(ids, rng);
    const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    ids.resize(count);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<RoundRecord> run_trial(const Dataset& ds, const ExperimentConfig& cfg, std::size_t trial_index,
                                   const RoundObserver& observer) {
    cfg.validate();
    const std::size_t n = ds.size();
    const std::vector<ItemId> holdout = holdout_split(n, cfg.holdout_fraction, cfg.master_seed);
    if (holdout.empty()) fail(ErrorKind::InvalidArgument, "holdout split is empty; dataset too small");
    const std::size_t available = n - holdout.size();
    if (cfg.n0 + cfg.rounds * cfg.batch > available) {
        fail(ErrorKind::InvalidArgument, "n0 + rounds * batch = " + std::to_string(cfg.n0 + cfg.rounds * cfg.batch) +
                                             " exceeds the " + std::to_string(available) + " non-holdout rows");
    }

    std::vector<bool> excluded(n, false);
    for (ItemId id : holdout) excluded[id] = true;
    for (ItemId id : cfg.init_exclude) {
        require(id < n, "init_exclude id " + std::to_string(id) + " out of range");
        excluded[id] = true;
    }
    std::vector<ItemId> candidates;
    for (ItemId id = 0; id < n; ++id)
        if (!excluded[id]) candidates.push_back(id);

    Rng init_rng(derive_seed(cfg.master_seed, kStreamInit, trial_index));
    Rng select_rng(derive_seed(cfg.master_seed, kStreamSelect, trial_index));
    SplitState split(n, holdout, biased_init(ds.labels, candidates, cfg.n0, ds.k, init_rng));

    const Matrix initial = gather_rows(ds.features, split.labeled_ids());
    const Matrix x = cfg.n0 > 0 ? standardize_apply(standardize_fit(initial), ds.features) : ds.features;
    const Matrix holdout_x = gather_rows(x, holdout);
    std::vector<int> holdout_y;
    for (ItemId id : holdout) holdout_y.push_back(ds.labels[id]);

    auto labeled_labels = [&] {
        std::vector<int> y;
        for (ItemId id : split.labeled_ids()) y.push_back(ds.labels[id]);
        return y;
    };
    auto train = [&] {
        if (split.labeled_count() == 0) return ModelParams::zeros(static_cast<std::size_t>(ds.k), ds.dim());
        return fit(gather_rows(x, split.labeled_ids()), labeled_labels(), ds.k, cfg.fit);
    };

    std::vector<RoundRecord> records;
    records.reserve(cfg.rounds + 1);
    ModelParams model;
    for (std::size_t round = 0; round <= cfg.rounds; ++round) {
        const auto start = std::chrono::steady_clock::now();
        RoundRecord rec;
        rec.trial = trial_index;
        rec.round = round;
        try {
            if (round > 0) {
                const std::vector<ItemId> pool = split.pool_ids();
                const PoolScores scores = score_pool(model, gather_rows(x, pool), pool, cfg.strategy);
                rec.selected_ids = select_batch(cfg.strategy, scores, cfg.batch, select_rng);
                // the oracle: ground-truth labels become visible
                for (ItemId id : rec.selected_ids) split.reveal(id);
            }
            model = train();
            rec.labeled_count = split.labeled_count();
            rec.holdout_accuracy = accuracy(model, holdout_x, holdout_y);
        } catch (const Error& e) {
            throw Error(e.kind(), "trial " + std::to_string(trial_index) + ", round " + std::to_string(round) + ": " +
                                      e.what());
        }
        rec.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                             .count();
        if (observer) observer(rec, split);
        records.push_back(std::move(rec));
    }
    return records;
}

ExperimentResult run_experiment(const Dataset& ds, const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<std::future<std::vector<RoundRecord>>> pending;
    pending.reserve(cfg.trials);
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        pending.push_back(std::async(std::launch::async, [&ds, &cfg, t] { return run_trial(ds, cfg, t); }));
    }
    ExperimentResult res;
    for (auto& f : pending) {
        std::vector<RoundRecord> trial = f.get();
        res.final_accuracies.push_back(trial.back().holdout_accuracy);
        for (auto& r : trial) res.records.push_back(std::move(r));
    }
    const double m = static_cast<double>(res.final_accuracies.size());
    res.final_accuracy_mean = std::accumulate(res.final_accuracies.begin(), res.final_accuracies.end(), 0.0) / m;
    if (res.final_accuracies.size() > 1) {
        double ss = 0.0;
        for (double a : res.final_accuracies) ss += (a - res.final_accuracy_mean) * (a - res.final_accuracy_mean);
        res.final_accuracy_std = std::sqrt(ss / (m - 1.0));
        res.std_defined = true;
    }
    return res;
}

void SynthPocketSpec::validate() const {
    require(k >= 2, "k must be >= 2");
    require(d >= static_cast<std::size_t>(k) + 1, "d must be at least k + 1 (one axis per class plus the pocket axis)");
    require(n >= 1, "n must be >= 1");
    require(beta >= 0.0 && beta < 1.0, "beta must lie in [0, 1)");
    require(beta == 0.0 || beta * static_cast<double>(n) >= 1.0, "infeasible pocket: beta * n < 1");
    require(pocket_class >= 0 && pocket_class < k, "pocket_class must lie in [0, k)");
    require(separation > 0.0 && std::isfinite(separation), "separation must be > 0");
    require(chi_floor >= 0.0 && chi_floor < 1.0, "chi_floor must lie in [0, 1)");
    check_prevalence(or_uniform(train_prevalence, k), k, chi_floor, "train_prevalence");
    check_prevalence(or_uniform(pool_prevalence, k), k, chi_floor, "pool_prevalence");
}

PocketDataset generate_pocket_dataset(const SynthPocketSpec& spec) {
    spec.validate();
    const std::size_t k = static_cast<std::size_t>(spec.k);
    const std::size_t pocket_n = static_cast<std::size_t>(std::llround(spec.beta * static_cast<double>(spec.n)));
    const std::vector<std::size_t> counts = allocate(spec.n - pocket_n, or_uniform(spec.pool_prevalence, spec.k));

    // Class c sits at (separation / sqrt 2) e_c, so centers are `separation` apart.
    // Axis k carries the pocket offset and is pure noise for every class.
    const double radius = spec.separation / std::numbers::sqrt2;
    const std::size_t host = (static_cast<std::size_t>(spec.pocket_class) + 1) % k;
    std::vector<std::vector<double>> centers(k, std::vector<double>(spec.d, 0.0));
    for (std::size_t c = 0; c < k; ++c) centers[c][c] = radius;
    // Pocket: half a separation beyond the host center, away from pocket_class,
    // and two separations out along axis k. Its nearest point to the initial
    // decision boundary is a full separation away, while a linear model that
    // uses axis k can still carve it out.
    std::vector<double> pocket_center = centers[host];
    for (std::size_t j = 0; j < k; ++j)
        pocket_center[j] += 0.5 * (centers[host][j] - centers[static_cast<std::size_t>(spec.pocket_class)][j]);
    pocket_center[k] = 2.0 * spec.separation;

    // (center, label, is_pocket) for every row before shuffling.
    struct Slot {
        const std::vector<double>* center;
        int label;
        bool pocket;
    };
    std::vector<Slot> slots;
    slots.reserve(spec.n);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t i = 0; i < counts[c]; ++i) slots.push_back({&centers[c], static_cast<int>(c), false});
    for (std::size_t i = 0; i < pocket_n; ++i) slots.push_back({&pocket_center, spec.pocket_class, true});

    Rng rng(derive_seed(spec.seed, kStreamSynth));
    std::vector<ItemId> order(slots.size());
    std::iota(order.begin(), order.end(), ItemId{0});
    shuffle(order, rng);

    PocketDataset out;
    Dataset& ds = out.dataset;
    ds.k = spec.k;
    ds.label_column = "label";
    for (std::size_t j = 0; j < spec.d; ++j) ds.feature_names.push_back("x" + std::to_string(j));
    for (std::size_t c = 0; c < k; ++c) ds.label_names.push_back(std::to_string(c));
    ds.features = Matrix(spec.n, spec.d);
    ds.labels.resize(spec.n);
    for (std::size_t row = 0; row < spec.n; ++row) {
        const Slot& s = slots[order[row]];
        for (std::size_t j = 0; j < spec.d; ++j) ds.features(row, j) = (*s.center)[j] + rng.standard_normal();
        ds.labels[row] = s.label;
        if (s.pocket) out.pocket_ids.push_back(row);
    }
    return out;
}

void save_pocket_manifest(const PocketDataset& pd, const SynthPocketSpec& spec, const std::filesystem::path& path) {
    nlohmann::ordered_json j;
    j["n"] = spec.n;
    j["d"] = spec.d;
    j["k"] = spec.k;
    j["beta"] = spec.beta;
    j["pocket_class"] = spec.pocket_class;
    j["separation"] = spec.separation;
    j["seed"] = spec.seed;
    j["train_prevalence"] = or_uniform(spec.train_prevalence, spec.k);
    j["pool_prevalence"] = or_uniform(spec.pool_prevalence, spec.k);
    j["pocket_size"] = pd.pocket_ids.size();
    j["pocket_ids"] = pd.pocket_ids;
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::Io, "cannot write " + path.string());
    out << j.dump() << '\n';
}

std::vector<ItemId> load_pocket_ids(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open pocket manifest " + path.string());
    try {
        const auto j = nlohmann::json::parse(in);
        return j.at("pocket_ids").get<std::vector<ItemId>>();
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::Config, path.string() + ": malformed pocket manifest: " + e.what());
    }
}

LemmaValidation validate_lemma(const SynthPocketSpec& spec, double chi, double delta, std::size_t repeats,
                               LemmaWeighting weighting) {
    require(repeats >= 1, "repeats must be >= 1");
    require(spec.k >= 2 && spec.n >= 1, "pool needs n >= 1 and k >= 2");
    LemmaValidation v;
    v.bound = lemma_bound({spec.beta, chi, spec.k, delta});
    v.pocket_size = static_cast<std::size_t>(std::llround(spec.beta * static_cast<double>(spec.n)));
    require(v.pocket_size >= 1, "infeasible pocket: beta * n < 1");
    if (v.bound.n_s > spec.n) {
        fail(ErrorKind::InsufficientItems, "n_s = " + std::to_string(v.bound.n_s) + " exceeds pool size " +
                                               std::to_string(spec.n));
    }

    const double top = std::log(static_cast<double>(spec.k));
    const double pocket_weight = weighting == LemmaWeighting::WorstCase ? v.bound.zeta : top;
    // ids [0, pocket_size) form the pocket
    std::vector<ScoredItem> items(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) items[i] = {i, i < v.pocket_size ? pocket_weight : top};

    const auto draws = static_cast<std::size_t>(v.bound.n_s);
    v.repeats = repeats;
    for (std::size_t r = 0; r < repeats; ++r) {
        if (draws == 0) continue;
        Rng rng(derive_seed(spec.seed, kStreamLemma, r));
        const auto picked = select_top_k(items, draws, rng);
        if (std::any_of(picked.begin(), picked.end(), [&](ItemId id) { return id < v.pocket_size; })) ++v.hits;
    }
    v.hit_rate = static_cast<double>(v.hits) / static_cast<double>(repeats);
    v.target = 1.0 - delta;
    v.standard_error = std::sqrt(v.target * (1.0 - v.target) / static_cast<double>(repeats));
    return v;
}

} // namespace wsal
