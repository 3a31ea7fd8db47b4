#include "wsal/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include "wsal/error.hpp"

namespace wsal {

std::string_view strategy_name(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::Random: return "random";
    case StrategyKind::Greedy: return "greedy";
    case StrategyKind::EpsGreedy: return "eps_greedy";
    case StrategyKind::Weighted: return "weighted";
    }
    return "unknown";
}

std::string_view strategy_label(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::Random: return "Random";
    case StrategyKind::Greedy: return "Greedy";
    case StrategyKind::EpsGreedy: return "EpsGreedy";
    case StrategyKind::Weighted: return "WeightedSampling";
    }
    return "Unknown";
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "random") return StrategyKind::Random;
    if (s == "greedy") return StrategyKind::Greedy;
    if (s == "eps_greedy" || s == "epsgreedy" || s == "eps-greedy" || s == "epsilon_greedy")
        return StrategyKind::EpsGreedy;
    if (s == "weighted" || s == "weighted_sampling" || s == "weightedsampling") return StrategyKind::Weighted;
    return std::nullopt;
}

void StrategyConfig::validate() const {
    require(epsilon >= 0.0 && epsilon <= 1.0, "epsilon must lie in [0, 1]");
    require(chi > 0.0 && chi < 1.0, "chi must lie in (0, 1)");
    require(std::isfinite(exponent_d) && exponent_d >= 0.0, "exponent_d must be >= 0");
}

PoolScores score_pool(const ModelParams& model, const Matrix& pool_features, std::span<const ItemId> ids,
                      const StrategyConfig& cfg) {
    cfg.validate();
    if (ids.size() != pool_features.rows()) fail(ErrorKind::DimensionMismatch, "pool ids do not match pool rows");
    PoolScores out;
    out.ids.assign(ids.begin(), ids.end());
    out.scores.reserve(ids.size());
    for (std::size_t i = 0; i < pool_features.rows(); ++i) {
        const ProbVector r = predict_proba(model, pool_features.row(i));
        out.scores.push_back(entropy(smooth(r, {cfg.chi})));
    }
    return out;
}

namespace {

// Pool positions sorted by descending score, ties to the smaller id.
std::vector<std::size_t> rank_by_score(const PoolScores& s) {
    std::vector<std::size_t> order(s.ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (s.scores[a] != s.scores[b]) return s.scores[a] > s.scores[b];
        return s.ids[a] < s.ids[b];
    });
    return order;
}

std::vector<ItemId> greedy(const PoolScores& s, std::size_t batch) {
    const auto order = rank_by_score(s);
    std::vector<ItemId> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) out.push_back(s.ids[order[i]]);
    return out;
}

std::vector<ItemId> eps_greedy(const PoolScores& s, std::size_t batch, double epsilon, Rng& rng) {
    // remaining holds pool positions in rank order; greedy takes the front,
    // exploration takes a uniform element.
    std::vector<std::size_t> remaining = rank_by_score(s);
    std::vector<ItemId> out;
    out.reserve(batch);
    for (std::size_t slot = 0; slot < batch; ++slot) {
        std::size_t pick = 0;
        if (rng.uniform_open() < epsilon) pick = static_cast<std::size_t>(rng.uniform_index(remaining.size()));
        out.push_back(s.ids[remaining[pick]]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return out;
}

std::vector<ItemId> weighted(const PoolScores& s, std::size_t batch, double d, Rng& rng) {
    WeightedStreamSampler sampler(batch, rng);
    for (std::size_t i = 0; i < s.ids.size(); ++i) {
        const double w = d == 0.0 ? 1.0 : std::pow(s.scores[i], d);
        sampler.offer({s.ids[i], w});
    }
    return sampler.result();
}

} // namespace

std::vector<ItemId> select_batch(const StrategyConfig& cfg, const PoolScores& scores, std::size_t batch, Rng& rng) {
    cfg.validate();
    require(batch >= 1, "batch size must be >= 1");
    if (scores.ids.size() != scores.scores.size()) fail(ErrorKind::DimensionMismatch, "pool ids/scores differ in length");
    if (scores.ids.size() < batch) {
        fail(ErrorKind::InsufficientItems, "pool has " + std::to_string(scores.ids.size()) +
                                               " items, fewer than batch = " + std::to_string(batch));
    }
    switch (cfg.kind) {
    case StrategyKind::Random: return uniform_sample(scores.ids, batch, rng);
    case StrategyKind::Greedy: return greedy(scores, batch);
    case StrategyKind::EpsGreedy: return eps_greedy(scores, batch, cfg.epsilon, rng);
    case StrategyKind::Weighted: return weighted(scores, batch, cfg.exponent_d, rng);
    }
    fail(ErrorKind::InvalidArgument, "unknown strategy");
}

} // namespace wsal
