#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "transval/core/dataset.hpp"
#include "transval/core/random.hpp"

namespace transval {

/// Train / validation / optional test partition of a source dataset.
/// The index vectors refer to rows of the source.
struct Split {
    Dataset train;
    Dataset validation;
    std::optional<Dataset> test;
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> validation_indices;
    std::vector<std::size_t> test_indices;

    std::size_t n() const noexcept { return train.size(); }
    std::size_t m() const noexcept { return validation.size(); }
};

/// Uniformly shuffled disjoint assignment of `n` train, `m` validation and
/// `test` test rows. Requires n, m >= 1 and n + m + test <= data.size().
Split build_split(const Dataset& data, std::size_t n, std::size_t m, std::size_t test,
                  const Seed& seed);

/// Split made from pre-built parts (e.g. generated separately).
Split make_split(Dataset train, Dataset validation, std::optional<Dataset> test = std::nullopt);

}  // namespace transval
