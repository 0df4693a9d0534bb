#include "transval/core/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "transval/core/error.hpp"

namespace transval {

const char* to_string(TaskKind kind) {
    return kind == TaskKind::classification ? "classification" : "regression";
}

Dataset::Dataset(TaskKind task, std::size_t dim, std::vector<double> features,
                 std::vector<double> targets, std::size_t class_count)
    : task_(task),
      dim_(dim),
      class_count_(task == TaskKind::classification ? class_count : 0),
      features_(std::move(features)),
      targets_(std::move(targets)) {
    if (dim_ == 0) throw ContractError("Dataset: feature dimension must be positive");
    if (targets_.empty()) throw ContractError("Dataset: must contain at least one example");
    if (features_.size() != targets_.size() * dim_) {
        throw ContractError("Dataset: feature buffer size " + std::to_string(features_.size()) +
                            " does not match " + std::to_string(targets_.size()) + " x " +
                            std::to_string(dim_));
    }
    for (double v : features_) {
        if (!std::isfinite(v)) throw ContractError("Dataset: non-finite feature value");
    }
    if (task_ == TaskKind::classification) {
        if (class_count_ == 0) throw ContractError("Dataset: class count must be positive");
        for (double y : targets_) {
            if (!(y >= 0.0) || y != std::floor(y) || y >= static_cast<double>(class_count_)) {
                throw ContractError("Dataset: class id " + std::to_string(y) +
                                    " is not an integer in [0, " +
                                    std::to_string(class_count_) + ")");
            }
        }
    } else {
        for (double y : targets_) {
            if (!std::isfinite(y)) throw ContractError("Dataset: non-finite regression target");
        }
    }
}

Dataset Dataset::from_examples(TaskKind task, std::span<const Example> examples,
                               std::size_t class_count) {
    if (examples.empty()) throw ContractError("Dataset: must contain at least one example");
    const std::size_t dim = examples.front().features.size();
    std::vector<double> features;
    std::vector<double> targets;
    features.reserve(examples.size() * dim);
    targets.reserve(examples.size());
    for (const Example& e : examples) {
        if (e.features.size() != dim) {
            throw ContractError("Dataset: examples have differing feature dimensions");
        }
        features.insert(features.end(), e.features.begin(), e.features.end());
        targets.push_back(e.y);
    }
    return Dataset(task, dim, std::move(features), std::move(targets), class_count);
}

Example Dataset::example(std::size_t i) const {
    auto r = row(i);
    return Example{{r.begin(), r.end()}, targets_[i]};
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<double> features;
    std::vector<double> targets;
    features.reserve(indices.size() * dim_);
    targets.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= size()) throw ContractError("Dataset::subset: index out of range");
        auto r = row(i);
        features.insert(features.end(), r.begin(), r.end());
        targets.push_back(targets_[i]);
    }
    return Dataset(task_, dim_, std::move(features), std::move(targets), class_count_);
}

Dataset Dataset::concat(const Dataset& other) const {
    if (other.task_ != task_ || other.dim_ != dim_) {
        throw ContractError("Dataset::concat: task kind or dimension mismatch");
    }
    std::vector<double> features = features_;
    features.insert(features.end(), other.features_.begin(), other.features_.end());
    std::vector<double> targets = targets_;
    targets.insert(targets.end(), other.targets_.begin(), other.targets_.end());
    return Dataset(task_, dim_, std::move(features), std::move(targets),
                   std::max(class_count_, other.class_count_));
}

Dataset Dataset::with_example(const Example& extra) const {
    if (extra.features.size() != dim_) {
        throw ContractError("Dataset::with_example: dimension mismatch");
    }
    std::vector<double> features = features_;
    features.insert(features.end(), extra.features.begin(), extra.features.end());
    std::vector<double> targets = targets_;
    targets.push_back(extra.y);
    return Dataset(task_, dim_, std::move(features), std::move(targets), class_count_);
}

Dataset Dataset::with_replaced(std::size_t i, const Example& replacement) const {
    if (i >= size() || replacement.features.size() != dim_) {
        throw ContractError("Dataset::with_replaced: bad index or dimension");
    }
    std::vector<double> features = features_;
    std::copy(replacement.features.begin(), replacement.features.end(),
              features.begin() + static_cast<std::ptrdiff_t>(i * dim_));
    std::vector<double> targets = targets_;
    targets[i] = replacement.y;
    return Dataset(task_, dim_, std::move(features), std::move(targets), class_count_);
}

std::uint64_t Dataset::fingerprint() const noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    auto mix = [&h](std::span<const double> values) {
        for (double v : values) {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, &v, sizeof v);
            for (unsigned char b : bytes) {
                h ^= b;
                h *= 0x100000001B3ULL;
            }
        }
    };
    mix(features_);
    mix(targets_);
    return h;
}

}  // namespace transval
