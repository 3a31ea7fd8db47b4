#include "wsal/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wsal/error.hpp"

namespace wsal {

double gen_log_key(double weight, double a) {
    require(std::isfinite(weight) && weight > 0.0, "sample weight must be finite and > 0");
    require(a > 0.0 && a < 1.0, "key uniform must lie in (0, 1)");
    return std::log(a) / weight;
}

double gen_key(double weight, double a) { return std::exp(gen_log_key(weight, a)); }

TopKSelector::TopKSelector(std::size_t k) : k_(k) {
    require(k >= 1, "K must be >= 1");
    heap_.reserve(k);
}

void TopKSelector::push(ItemId id, double key) {
    ++seen_;
    const Entry e{key, id};
    if (heap_.size() < k_) {
        heap_.push_back(e);
        std::push_heap(heap_.begin(), heap_.end(), worse);
        peak_ = std::max(peak_, heap_.size());
        return;
    }
    // heap_.front() is the weakest retained entry
    if (!worse(e, heap_.front())) return;
    std::pop_heap(heap_.begin(), heap_.end(), worse);
    heap_.back() = e;
    std::push_heap(heap_.begin(), heap_.end(), worse);
}

std::vector<ItemId> TopKSelector::ids() const {
    std::vector<Entry> sorted = heap_;
    std::sort(sorted.begin(), sorted.end(), worse);
    std::vector<ItemId> out;
    out.reserve(sorted.size());
    for (const Entry& e : sorted) out.push_back(e.id);
    return out;
}

void WeightedStreamSampler::offer(const ScoredItem& item) {
    require(std::isfinite(item.weight) && item.weight > 0.0,
            "item " + std::to_string(item.id) + " has non-positive weight");
    top_.push(item.id, gen_log_key(item.weight, rng_.uniform_open()));
}

std::vector<ItemId> WeightedStreamSampler::result() const {
    if (top_.seen() < top_.capacity()) {
        fail(ErrorKind::InsufficientItems, "stream yielded " + std::to_string(top_.seen()) +
                                               " items, fewer than K = " + std::to_string(top_.capacity()));
    }
    return top_.ids();
}

ReservoirSampler::ReservoirSampler(std::size_t k, Rng& rng) : k_(k), rng_(rng) {
    require(k >= 1, "K must be >= 1");
    reservoir_.reserve(k);
}

void ReservoirSampler::offer(ItemId id) {
    ++seen_;
    if (reservoir_.size() < k_) {
        reservoir_.push_back(id);
        return;
    }
    const std::uint64_t j = rng_.uniform_index(seen_);
    if (j < k_) reservoir_[j] = id;
}

std::vector<ItemId> ReservoirSampler::result() const {
    if (seen_ < k_) {
        fail(ErrorKind::InsufficientItems,
             "pool has " + std::to_string(seen_) + " items, fewer than K = " + std::to_string(k_));
    }
    return reservoir_;
}

std::vector<ItemId> select_top_k(std::span<const ScoredItem> stream, std::size_t k, Rng& rng) {
    WeightedStreamSampler sampler(k, rng);
    for (const ScoredItem& item : stream) sampler.offer(item);
    return sampler.result();
}

std::vector<ItemId> uniform_sample(std::span<const ItemId> ids, std::size_t k, Rng& rng) {
    ReservoirSampler sampler(k, rng);
    for (ItemId id : ids) sampler.offer(id);
    return sampler.result();
}

} // namespace wsal
