#include "transval/data/synthetic.hpp"

#include <cmath>

#include "transval/core/error.hpp"

namespace transval {

void CubicSpec::validate() const {
    if (!(x_min < x_max) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
        throw ContractError("cubic: x range must be a nonempty finite interval");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw ContractError("cubic: noise sigma must be finite and >= 0");
    }
    for (double c : coefficients) {
        if (!std::isfinite(c)) throw ContractError("cubic: coefficients must be finite");
    }
}

Dataset gen_cubic(const CubicSpec& spec, std::size_t count, const Seed& seed) {
    spec.validate();
    if (count < 1) throw ContractError("gen_cubic: count must be >= 1");
    Stream xs(seed.derive("x"));
    Stream noise(seed.derive("noise"));
    std::vector<double> features(count);
    std::vector<double> targets(count);
    for (std::size_t i = 0; i < count; ++i) {
        features[i] = xs.uniform(spec.x_min, spec.x_max);
        targets[i] = spec.curve(features[i]);
        if (spec.noise_sigma > 0.0) targets[i] += spec.noise_sigma * noise.normal();
    }
    return Dataset(TaskKind::regression, 1, std::move(features), std::move(targets));
}

Generator cubic_generator(const CubicSpec& spec) {
    spec.validate();
    return Generator("cubic", TaskKind::regression,
                     [spec](std::size_t count, const Seed& seed) {
                         return gen_cubic(spec, count, seed);
                     });
}

namespace {

void check_blobs(const BlobSpec& spec) {
    if (spec.classes < 2) throw ContractError("blobs: need at least 2 classes");
    if (spec.dim < 1) throw ContractError("blobs: dimension must be >= 1");
    if (!std::isfinite(spec.separation)) throw ContractError("blobs: separation must be finite");
}

void push_point(const BlobSpec& spec, std::size_t label, Stream& stream,
                std::vector<double>& features, std::vector<double>& targets) {
    for (std::size_t d = 0; d < spec.dim; ++d) {
        const double centre = d == 0 ? static_cast<double>(label) * spec.separation : 0.0;
        features.push_back(centre + stream.normal());
    }
    targets.push_back(static_cast<double>(label));
}

}  // namespace

Dataset gen_blobs(const BlobSpec& spec, std::size_t per_class, const Seed& seed) {
    check_blobs(spec);
    if (per_class < 1) throw ContractError("gen_blobs: per-class count must be >= 1");
    Stream stream(seed);
    std::vector<double> features;
    std::vector<double> targets;
    features.reserve(spec.classes * per_class * spec.dim);
    for (std::size_t c = 0; c < spec.classes; ++c) {
        for (std::size_t i = 0; i < per_class; ++i) push_point(spec, c, stream, features, targets);
    }
    return Dataset(TaskKind::classification, spec.dim, std::move(features), std::move(targets),
                   spec.classes);
}

Generator blobs_generator(const BlobSpec& spec) {
    check_blobs(spec);
    return Generator("blobs", TaskKind::classification,
                     [spec](std::size_t count, const Seed& seed) {
                         Stream labels(seed.derive("label"));
                         Stream points(seed.derive("point"));
                         std::vector<double> features;
                         std::vector<double> targets;
                         for (std::size_t i = 0; i < count; ++i) {
                             push_point(spec, labels.index(spec.classes), points, features,
                                        targets);
                         }
                         return Dataset(TaskKind::classification, spec.dim, std::move(features),
                                        std::move(targets), spec.classes);
                     });
}

}  // namespace transval
