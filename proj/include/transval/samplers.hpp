#pragma once

// The two procedures that leak validation examples into training.

#include <cstddef>
#include <vector>

#include "transval/core/random.hpp"
#include "transval/core/split.hpp"

namespace transval {

/// A split whose training set has been augmented with copies of some
/// validation examples. `base.validation` is untouched: selection always
/// evaluates over the full original V, leaked examples included.
struct AugmentedSplit {
    Split base;
    /// Sorted validation indices copied into training.
    std::vector<std::size_t> leaked;
    /// T followed by the leaked rows of V, in index order.
    Dataset effective_train;
};

/// Wraps a split with nothing leaked.
AugmentedSplit unaugmented(Split split);

/// Presample procedure: each validation example joins training by an
/// independent Bernoulli(p) draw. Draw i is `uniform() < p` on the i-th value
/// of the seed's stream, so for a fixed seed the leaked sets are nested in p.
AugmentedSplit presample(const Split& split, double p, const Seed& seed);

/// Adds exactly the given validation rows to training.
AugmentedSplit leak_indices(const Split& split, std::vector<std::size_t> indices);

enum class BatchSource { train, validation };

struct Batch {
    BatchSource source;
    std::vector<std::size_t> indices;  // rows of the source set
    std::size_t iteration;
};

struct BatchSchedule {
    std::vector<Batch> batches;
    std::size_t batch_size = 0;
    double p = 0.0;
    /// Sizes of T and V the schedule was drawn for.
    std::size_t train_size = 0;
    std::size_t validation_size = 0;

    std::size_t validation_batches() const;
    /// Distinct validation rows that appear in any batch.
    std::size_t distinct_validation_examples() const;
};

/// Batch-sample procedure: each iteration independently sources a whole batch
/// from V with probability p, otherwise from T. Within a source, batches walk
/// a fresh shuffle per epoch; an epoch ends when fewer than batch_size rows
/// remain. Requires 1 <= batch_size <= min(n, m).
BatchSchedule batch_schedule(const Split& split, double p, std::size_t batch_size,
                             std::size_t iterations, const Seed& seed);

/// Same, from raw sizes; used when only T exists (p must then be 0 or m ignored).
BatchSchedule batch_schedule(std::size_t n, std::size_t m, double p, std::size_t batch_size,
                             std::size_t iterations, const Seed& seed);

struct EquivalentP {
    double raw;    // (n / m) * p_batch
    double value;  // raw clamped to [0, 1]
    bool clamped;
};

/// Presample probability comparable to batch-sample probability `p_batch`.
EquivalentP equivalent_presample_p(double p_batch, std::size_t n, std::size_t m);

}  // namespace transval
