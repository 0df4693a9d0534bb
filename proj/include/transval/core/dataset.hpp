#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace transval {

enum class TaskKind { classification, regression };

const char* to_string(TaskKind kind);

/// One labelled point z = (x, y). For classification `y` holds the class id
/// as an exact non-negative integer.
struct Example {
    std::vector<double> features;
    double y = 0.0;
};

/// Immutable, nonempty set of examples with a shared feature dimension.
/// Features are stored row-major in one buffer.
class Dataset {
public:
    /// Validates every invariant; throws ContractError on violation.
    Dataset(TaskKind task, std::size_t dim, std::vector<double> features,
            std::vector<double> targets, std::size_t class_count = 0);

    static Dataset from_examples(TaskKind task, std::span<const Example> examples,
                                 std::size_t class_count = 0);

    TaskKind task() const noexcept { return task_; }
    std::size_t size() const noexcept { return targets_.size(); }
    std::size_t dim() const noexcept { return dim_; }
    /// Zero for regression.
    std::size_t class_count() const noexcept { return class_count_; }

    std::span<const double> row(std::size_t i) const {
        return {features_.data() + i * dim_, dim_};
    }
    double target(std::size_t i) const { return targets_[i]; }
    std::size_t label(std::size_t i) const { return static_cast<std::size_t>(targets_[i]); }

    std::span<const double> features() const noexcept { return features_; }
    std::span<const double> targets() const noexcept { return targets_; }

    Example example(std::size_t i) const;

    /// Rows picked by index, in the given order (repeats allowed).
    Dataset subset(std::span<const std::size_t> indices) const;

    /// Rows of `this` followed by rows of `other`; class count is the max of both.
    Dataset concat(const Dataset& other) const;

    /// Copy with one extra row appended.
    Dataset with_example(const Example& extra) const;

    /// Copy with row `i` replaced.
    Dataset with_replaced(std::size_t i, const Example& replacement) const;

    /// FNV-1a hash over the raw bytes of features and targets.
    std::uint64_t fingerprint() const noexcept;

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    TaskKind task_;
    std::size_t dim_;
    std::size_t class_count_;
    std::vector<double> features_;
    std::vector<double> targets_;
};

}  // namespace transval
