#include "transval/learners/models.hpp"

#include <algorithm>
#include <numeric>

#include "transval/learners/svm.hpp"

namespace transval {

double PolyModel::predict(std::span<const double> x) const {
    double acc = 0.0;
    for (auto c = coefficients.rbegin(); c != coefficients.rend(); ++c) acc = acc * x[0] + *c;
    return acc;
}

std::vector<std::size_t> KnnModel::neighbours(std::span<const double> x) const {
    const Dataset& data = *training;
    std::vector<std::pair<double, std::size_t>> dist(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto r = data.row(i);
        double sq = 0.0;
        for (std::size_t d = 0; d < r.size(); ++d) {
            const double diff = r[d] - x[d];
            sq += diff * diff;
        }
        dist[i] = {sq, i};
    }
    // pair ordering breaks distance ties by the lower training index.
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = dist[i].second;
    return out;
}

double KnnModel::predict(std::span<const double> x) const {
    std::vector<std::size_t> votes(training->class_count(), 0);
    for (std::size_t i : neighbours(x)) ++votes[training->label(i)];
    // max_element returns the first maximum: lowest class id wins a tie.
    return static_cast<double>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

double SvmMachine::decision(std::span<const double> x, std::size_t dim, double gamma) const {
    double f = -rho;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        f += coefficients[i] *
             radial_kernel(std::span<const double>(support.data() + i * dim, dim), x, gamma);
    }
    return f;
}

double SvmModel::predict(std::span<const double> x) const {
    if (machines.size() == 1) return machines[0].decision(x, dim, gamma) > 0.0 ? 1.0 : 0.0;
    std::size_t best = 0;
    double best_margin = machines[0].decision(x, dim, gamma);
    for (std::size_t c = 1; c < machines.size(); ++c) {
        const double margin = machines[c].decision(x, dim, gamma);
        if (margin > best_margin) {
            best_margin = margin;
            best = c;
        }
    }
    return static_cast<double>(best);
}

std::vector<double> LogisticModel::scores(std::span<const double> x) const {
    std::vector<double> out(class_count);
    for (std::size_t c = 0; c < class_count; ++c) {
        const double* w = weights.data() + c * (dim + 1);
        double s = w[dim];
        for (std::size_t d = 0; d < dim; ++d) s += w[d] * x[d];
        out[c] = s;
    }
    return out;
}

double LogisticModel::predict(std::span<const double> x) const {
    const auto s = scores(x);
    return static_cast<double>(std::max_element(s.begin(), s.end()) - s.begin());
}

}  // namespace transval
