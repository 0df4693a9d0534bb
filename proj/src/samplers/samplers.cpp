#include "transval/samplers.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "transval/core/error.hpp"

namespace transval {

namespace {

void check_probability(double p, const char* where) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ContractError(std::string(where) + ": p = " + std::to_string(p) +
                            " is outside [0, 1]");
    }
}

// Hands out fixed-size batches from per-epoch permutations of [0, size).
class EpochCursor {
public:
    EpochCursor(std::size_t size, std::size_t batch, Seed seed)
        : size_(size), batch_(batch), seed_(std::move(seed)) {}

    std::vector<std::size_t> next() {
        if (order_.empty() || position_ + batch_ > order_.size()) start_epoch();
        std::vector<std::size_t> out(order_.begin() + static_cast<std::ptrdiff_t>(position_),
                                     order_.begin() +
                                         static_cast<std::ptrdiff_t>(position_ + batch_));
        position_ += batch_;
        return out;
    }

private:
    void start_epoch() {
        order_.resize(size_);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        Stream stream(seed_.derive("epoch", epoch_++));
        stream.shuffle(std::span<std::size_t>(order_));
        position_ = 0;
    }

    std::size_t size_;
    std::size_t batch_;
    Seed seed_;
    std::vector<std::size_t> order_;
    std::size_t position_ = 0;
    std::uint64_t epoch_ = 0;
};

}  // namespace

AugmentedSplit unaugmented(Split split) {
    Dataset train = split.train;
    return AugmentedSplit{std::move(split), {}, std::move(train)};
}

AugmentedSplit leak_indices(const Split& split, std::vector<std::size_t> indices) {
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end() ||
        (!indices.empty() && indices.back() >= split.m())) {
        throw ContractError("leak_indices: indices must be distinct rows of V");
    }
    Dataset effective = indices.empty()
                            ? split.train
                            : split.train.concat(split.validation.subset(indices));
    return AugmentedSplit{split, std::move(indices), std::move(effective)};
}

AugmentedSplit presample(const Split& split, double p, const Seed& seed) {
    check_probability(p, "presample");
    Stream stream(seed);
    std::vector<std::size_t> leaked;
    for (std::size_t i = 0; i < split.m(); ++i) {
        if (stream.bernoulli(p)) leaked.push_back(i);
    }
    return leak_indices(split, std::move(leaked));
}

std::size_t BatchSchedule::validation_batches() const {
    return static_cast<std::size_t>(
        std::count_if(batches.begin(), batches.end(),
                      [](const Batch& b) { return b.source == BatchSource::validation; }));
}

std::size_t BatchSchedule::distinct_validation_examples() const {
    std::vector<char> seen(validation_size, 0);
    std::size_t count = 0;
    for (const Batch& b : batches) {
        if (b.source != BatchSource::validation) continue;
        for (std::size_t i : b.indices) {
            if (!seen[i]) {
                seen[i] = 1;
                ++count;
            }
        }
    }
    return count;
}

BatchSchedule batch_schedule(std::size_t n, std::size_t m, double p, std::size_t batch_size,
                             std::size_t iterations, const Seed& seed) {
    check_probability(p, "batch_schedule");
    if (batch_size == 0) throw SizingError("batch_schedule: batch size must be at least 1");
    if (batch_size > n || (p > 0.0 && batch_size > m)) {
        throw SizingError("batch_schedule: batch size " + std::to_string(batch_size) +
                          " exceeds min(n, m) = " + std::to_string(std::min(n, m)));
    }
    BatchSchedule schedule;
    schedule.batch_size = batch_size;
    schedule.p = p;
    schedule.train_size = n;
    schedule.validation_size = m;
    schedule.batches.reserve(iterations);

    Stream sources(seed.derive("source"));
    EpochCursor train_cursor(n, batch_size, seed.derive("train"));
    EpochCursor validation_cursor(m, batch_size, seed.derive("validation"));
    for (std::size_t it = 0; it < iterations; ++it) {
        if (sources.bernoulli(p)) {
            schedule.batches.push_back({BatchSource::validation, validation_cursor.next(), it});
        } else {
            schedule.batches.push_back({BatchSource::train, train_cursor.next(), it});
        }
    }
    return schedule;
}

BatchSchedule batch_schedule(const Split& split, double p, std::size_t batch_size,
                             std::size_t iterations, const Seed& seed) {
    if (batch_size > std::min(split.n(), split.m())) {
        throw SizingError("batch_schedule: batch size " + std::to_string(batch_size) +
                          " exceeds min(n, m) = " +
                          std::to_string(std::min(split.n(), split.m())));
    }
    return batch_schedule(split.n(), split.m(), p, batch_size, iterations, seed);
}

EquivalentP equivalent_presample_p(double p_batch, std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) throw ContractError("equivalent_presample_p: n and m must be >= 1");
    check_probability(p_batch, "equivalent_presample_p");
    const double raw = static_cast<double>(n) / static_cast<double>(m) * p_batch;
    const bool clamped = raw > 1.0;
    return {raw, clamped ? 1.0 : raw, clamped};
}

}  // namespace transval
