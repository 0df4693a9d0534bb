#pragma once

#include <optional>
#include <vector>

#include "transval/core/dataset.hpp"
#include "transval/core/random.hpp"
#include "transval/data/synthetic.hpp"

namespace transval {

/// Moves regression targets from the `base` curve to the `shifted` one:
/// y' = y + shifted(x) - base(x). Noise realisations are kept.
struct RegressionBias {
    CubicSpec base;
    CubicSpec shifted;
};

enum class FeatureFlip {
    reverse,     // reverse the whole feature vector
    left_right,  // reverse each row of a width-`image_width` image
    up_down,     // reverse the row order of that image
};

/// Resamples class membership toward `priors` (empty keeps the data as is)
/// and applies each flip independently to each example with
/// `flip_probability`. Every flip is an involution.
struct ClassificationBias {
    std::vector<double> priors;
    std::vector<FeatureFlip> flips;
    double flip_probability = 0.5;
    std::size_t image_width = 0;  // required by left_right / up_down
};

struct BiasSpec {
    std::optional<RegressionBias> regression;
    std::optional<ClassificationBias> classification;
};

/// Default dataset-shift bias for the cubic task: the linear coefficient
/// moves by +1.0.
RegressionBias default_regression_bias(const CubicSpec& base);

/// Applies `spec` to `data`. Example count and feature dimension are kept.
Dataset apply_bias(const Dataset& data, const BiasSpec& spec, const Seed& seed);

/// Applies one flip to a feature vector in place.
void apply_flip(FeatureFlip flip, std::span<double> features, std::size_t image_width);

}  // namespace transval
