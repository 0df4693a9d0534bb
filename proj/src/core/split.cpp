#include "transval/core/split.hpp"

#include <numeric>
#include <string>

#include "transval/core/error.hpp"

namespace transval {

Split build_split(const Dataset& data, std::size_t n, std::size_t m, std::size_t test,
                  const Seed& seed) {
    if (n == 0 || m == 0) {
        throw SizingError("build_split: train and validation sizes must be at least 1 (got n=" +
                          std::to_string(n) + ", m=" + std::to_string(m) + ")");
    }
    if (n + m + test > data.size()) {
        throw SizingError("build_split: n + m + test = " + std::to_string(n + m + test) +
                          " exceeds dataset size " + std::to_string(data.size()));
    }
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Stream stream(seed);
    stream.shuffle(std::span<std::size_t>(order));

    auto first = order.begin();
    std::vector<std::size_t> train_idx(first, first + static_cast<std::ptrdiff_t>(n));
    std::vector<std::size_t> val_idx(first + static_cast<std::ptrdiff_t>(n),
                                     first + static_cast<std::ptrdiff_t>(n + m));
    std::vector<std::size_t> test_idx(first + static_cast<std::ptrdiff_t>(n + m),
                                      first + static_cast<std::ptrdiff_t>(n + m + test));

    Split split{data.subset(train_idx), data.subset(val_idx), std::nullopt, {}, {}, {}};
    if (test > 0) split.test = data.subset(test_idx);
    split.train_indices = std::move(train_idx);
    split.validation_indices = std::move(val_idx);
    split.test_indices = std::move(test_idx);
    return split;
}

Split make_split(Dataset train, Dataset validation, std::optional<Dataset> test) {
    if (train.task() != validation.task() || train.dim() != validation.dim() ||
        (test && (test->task() != train.task() || test->dim() != train.dim()))) {
        throw ContractError("make_split: parts disagree on task kind or dimension");
    }
    const std::size_t n = train.size();
    const std::size_t m = validation.size();
    const std::size_t t = test ? test->size() : 0;
    Split split{std::move(train), std::move(validation), std::move(test), {}, {}, {}};
    split.train_indices.resize(n);
    std::iota(split.train_indices.begin(), split.train_indices.end(), std::size_t{0});
    split.validation_indices.resize(m);
    std::iota(split.validation_indices.begin(), split.validation_indices.end(), n);
    split.test_indices.resize(t);
    std::iota(split.test_indices.begin(), split.test_indices.end(), n + m);
    return split;
}

}  // namespace transval
