#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wsal/classifier.hpp"
#include "wsal/rng.hpp"
#include "wsal/sampler.hpp"

namespace wsal {

enum class StrategyKind { Random, Greedy, EpsGreedy, Weighted };

/// Canonical lower-case name ("random", "greedy", "eps_greedy", "weighted").
std::string_view strategy_name(StrategyKind kind);
/// Display name used in report headers.
std::string_view strategy_label(StrategyKind kind);
/// Accepts canonical names case-insensitively, plus "epsgreedy"/"eps-greedy"/"epsilon_greedy".
std::optional<StrategyKind> parse_strategy(std::string_view name);

struct StrategyConfig {
    StrategyKind kind = StrategyKind::Weighted;
    double epsilon = 0.05;
    double chi = 0.05;
    /// Weighted only: items are sampled with weight u^exponent_d.
    double exponent_d = 1.0;

    void validate() const;
};

struct PoolScores {
    std::vector<ItemId> ids;
    std::vector<double> scores;
};

/// Smoothed predictive entropy u for each pool row. ids[i] labels features.row(i).
PoolScores score_pool(const ModelParams& model, const Matrix& pool_features, std::span<const ItemId> ids,
                      const StrategyConfig& cfg);

/// Chooses `batch` distinct ids from the scored pool.
std::vector<ItemId> select_batch(const StrategyConfig& cfg, const PoolScores& scores, std::size_t batch, Rng& rng);

} // namespace wsal
