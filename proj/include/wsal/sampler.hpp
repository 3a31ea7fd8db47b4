#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "wsal/rng.hpp"

namespace wsal {

using ItemId = std::uint64_t;

struct ScoredItem {
    ItemId id = 0;
    double weight = 1.0;
};

/// Exponent key a^(1/weight), evaluated as exp(ln(a) / weight).
/// Requires weight > 0 and a in (0, 1).
double gen_key(double weight, double a);

/// ln(a) / weight, the logarithm of gen_key. Samplers rank on this value:
/// the order is identical, and it does not underflow to 0 for tiny weights.
double gen_log_key(double weight, double a);

/// Bounded min-heap that keeps the K largest (key, id) pairs seen so far.
/// Equal keys prefer the smaller id.
class TopKSelector {
public:
    explicit TopKSelector(std::size_t k);

    void push(ItemId id, double key);

    std::size_t capacity() const noexcept { return k_; }
    std::size_t seen() const noexcept { return seen_; }
    /// Largest number of entries retained at any point; never exceeds capacity().
    std::size_t peak_retained() const noexcept { return peak_; }

    /// Retained ids ordered by descending key.
    std::vector<ItemId> ids() const;

private:
    struct Entry {
        double key;
        ItemId id;
    };
    static bool worse(const Entry& a, const Entry& b) noexcept {
        return a.key > b.key || (a.key == b.key && a.id < b.id);
    }

    std::size_t k_;
    std::size_t seen_ = 0;
    std::size_t peak_ = 0;
    std::vector<Entry> heap_;
};

/// One-pass weighted sampling without replacement. Each offered item draws
/// a ~ U(0,1) from the rng and competes with key a^(1/weight) (as its log).
class WeightedStreamSampler {
public:
    WeightedStreamSampler(std::size_t k, Rng& rng) : top_(k), rng_(rng) {}

    void offer(const ScoredItem& item);

    std::size_t seen() const noexcept { return top_.seen(); }
    std::size_t peak_retained() const noexcept { return top_.peak_retained(); }

    /// Throws InsufficientItems when fewer than k items were offered.
    std::vector<ItemId> result() const;

private:
    TopKSelector top_;
    Rng& rng_;
};

/// Classic reservoir (Algorithm R): every K-subset is equally likely.
class ReservoirSampler {
public:
    ReservoirSampler(std::size_t k, Rng& rng);

    void offer(ItemId id);

    std::size_t seen() const noexcept { return seen_; }
    std::vector<ItemId> result() const;

private:
    std::size_t k_;
    std::size_t seen_ = 0;
    std::vector<ItemId> reservoir_;
    Rng& rng_;
};

std::vector<ItemId> select_top_k(std::span<const ScoredItem> stream, std::size_t k, Rng& rng);

std::vector<ItemId> uniform_sample(std::span<const ItemId> ids, std::size_t k, Rng& rng);

} // namespace wsal
