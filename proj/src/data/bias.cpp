#include "transval/data/bias.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "transval/core/error.hpp"

namespace transval {

RegressionBias default_regression_bias(const CubicSpec& base) {
    RegressionBias bias{base, base};
    bias.shifted.coefficients[2] += 1.0;
    return bias;
}

void apply_flip(FeatureFlip flip, std::span<double> features, std::size_t image_width) {
    if (flip == FeatureFlip::reverse) {
        std::reverse(features.begin(), features.end());
        return;
    }
    if (image_width == 0 || features.size() % image_width != 0) {
        throw ContractError("image flips need an image width dividing the feature dimension");
    }
    const std::size_t rows = features.size() / image_width;
    if (flip == FeatureFlip::left_right) {
        for (std::size_t r = 0; r < rows; ++r) {
            auto row = features.subspan(r * image_width, image_width);
            std::reverse(row.begin(), row.end());
        }
    } else {
        for (std::size_t r = 0; r < rows / 2; ++r) {
            std::swap_ranges(features.begin() + static_cast<std::ptrdiff_t>(r * image_width),
                             features.begin() + static_cast<std::ptrdiff_t>((r + 1) * image_width),
                             features.begin() +
                                 static_cast<std::ptrdiff_t>((rows - 1 - r) * image_width));
        }
    }
}

namespace {

Dataset bias_regression(const Dataset& data, const RegressionBias& bias) {
    if (data.dim() != 1) throw ContractError("apply_bias: regression bias needs 1-D features");
    std::vector<double> targets(data.targets().begin(), data.targets().end());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double x = data.row(i)[0];
        targets[i] += bias.shifted.curve(x) - bias.base.curve(x);
    }
    return Dataset(TaskKind::regression, 1,
                   std::vector<double>(data.features().begin(), data.features().end()),
                   std::move(targets));
}

Dataset bias_classification(const Dataset& data, const ClassificationBias& bias,
                            const Seed& seed) {
    if (!(bias.flip_probability >= 0.0 && bias.flip_probability <= 1.0)) {
        throw ContractError("apply_bias: flip probability must be in [0, 1]");
    }
    std::vector<std::size_t> rows(data.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});

    if (!bias.priors.empty()) {
        if (bias.priors.size() != data.class_count()) {
            throw ContractError("apply_bias: need one prior weight per class");
        }
        const double total = std::accumulate(bias.priors.begin(), bias.priors.end(), 0.0);
        if (std::any_of(bias.priors.begin(), bias.priors.end(), [](double w) { return w < 0; }) ||
            std::abs(total - 1.0) > 1e-9) {
            throw ContractError("apply_bias: prior weights must be non-negative and sum to 1");
        }
        std::vector<std::vector<std::size_t>> by_class(data.class_count());
        for (std::size_t i = 0; i < data.size(); ++i) by_class[data.label(i)].push_back(i);
        bool reachable = false;
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            reachable = reachable || (bias.priors[c] > 0.0 && !by_class[c].empty());
        }
        if (!reachable) {
            throw ContractError("apply_bias: no class with positive prior has examples");
        }
        std::vector<double> cumulative(bias.priors.size());
        std::partial_sum(bias.priors.begin(), bias.priors.end(), cumulative.begin());
        Stream stream(seed.derive("resample"));
        for (std::size_t& row : rows) {
            std::size_t c;
            do {
                const double u = stream.uniform() * cumulative.back();
                c = static_cast<std::size_t>(
                    std::upper_bound(cumulative.begin(), cumulative.end(), u) -
                    cumulative.begin());
                c = std::min(c, cumulative.size() - 1);
            } while (by_class[c].empty() || bias.priors[c] == 0.0);
            row = by_class[c][stream.index(by_class[c].size())];
        }
    }

    Dataset resampled = data.subset(rows);
    if (bias.flips.empty() || bias.flip_probability == 0.0) return resampled;
    std::vector<double> features(resampled.features().begin(), resampled.features().end());
    Stream stream(seed.derive("flip"));
    for (std::size_t i = 0; i < resampled.size(); ++i) {
        std::span<double> row(features.data() + i * data.dim(), data.dim());
        for (FeatureFlip flip : bias.flips) {
            if (stream.bernoulli(bias.flip_probability)) apply_flip(flip, row, bias.image_width);
        }
    }
    return Dataset(TaskKind::classification, data.dim(), std::move(features),
                   std::vector<double>(resampled.targets().begin(), resampled.targets().end()),
                   data.class_count());
}

}  // namespace

Dataset apply_bias(const Dataset& data, const BiasSpec& spec, const Seed& seed) {
    if (data.task() == TaskKind::regression) {
        if (!spec.regression || spec.classification) {
            throw ContractError("apply_bias: regression data needs a regression bias spec");
        }
        return bias_regression(data, *spec.regression);
    }
    if (!spec.classification || spec.regression) {
        throw ContractError("apply_bias: classification data needs a classification bias spec");
    }
    return bias_classification(data, *spec.classification, seed);
}

}  // namespace transval
