#pragma once

#include <array>
#include <cstddef>

#include "transval/core/dataset.hpp"
#include "transval/core/random.hpp"
#include "transval/stability.hpp"

namespace transval {

/// y = a x^3 + b x^2 + c x + d + N(0, noise_sigma^2), x ~ U[x_min, x_max).
struct CubicSpec {
    std::array<double, 4> coefficients{1.0, 0.0, -2.0, 0.0};  // a, b, c, d
    double x_min = -2.0;
    double x_max = 2.0;
    double noise_sigma = 0.25;

    double curve(double x) const {
        const auto& [a, b, c, d] = coefficients;
        return ((a * x + b) * x + c) * x + d;
    }
    void validate() const;
};

/// `count` points of the noisy cubic; 1-D regression data.
Dataset gen_cubic(const CubicSpec& spec, std::size_t count, const Seed& seed);

Generator cubic_generator(const CubicSpec& spec);

/// Isotropic unit-variance Gaussian clusters. Class c is centred at
/// c * separation along the first axis; labels are cluster ids.
struct BlobSpec {
    std::size_t classes = 2;
    std::size_t dim = 2;
    double separation = 4.0;
};

/// Exactly `per_class` points of each class, class-major order.
Dataset gen_blobs(const BlobSpec& spec, std::size_t per_class, const Seed& seed);

/// i.i.d. draws with a uniformly chosen class per point.
Generator blobs_generator(const BlobSpec& spec);

}  // namespace transval
