#include "transval/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "transval/stability.hpp"

namespace transval {

std::size_t argmin_lowest(std::span<const double> values) {
    if (values.empty()) throw ContractError("argmin_lowest: empty list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[best]) best = i;
    }
    return best;
}

SelectionReport select_model(const ModelGrid& grid, const Dataset& train,
                             const Dataset& validation, const std::optional<Dataset>& test,
                             LossKind loss, const Seed& seed) {
    if (grid.empty()) throw ContractError("select_model: empty model grid");
    SelectionReport report;
    report.validation_losses.resize(grid.size());
    if (test) report.test_losses.emplace(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        try {
            const FittedModel model = fit(grid[k], train, seed.derive("model", k));
            report.validation_losses[k] = evaluate(model, validation, loss);
            if (test) (*report.test_losses)[k] = evaluate(model, *test, loss);
        } catch (const std::exception& e) {
            throw ModelError(k, e.what());
        }
    }
    report.chosen = argmin_lowest(report.validation_losses);
    report.min_gap = grid.size() < 2 ? std::numeric_limits<double>::infinity()
                                     : min_selection_gap(report.validation_losses);
    if (report.test_losses) report.bias_flag = selection_bias(report).flag;
    return report;
}

SelectionReport select_model(const ModelGrid& grid, const Split& split, LossKind loss,
                             const Seed& seed) {
    return select_model(grid, split.train, split.validation, split.test, loss, seed);
}

SelectionReport select_model(const ModelGrid& grid, const AugmentedSplit& split, LossKind loss,
                             const Seed& seed) {
    return select_model(grid, split.effective_train, split.base.validation, split.base.test,
                        loss, seed);
}

bool ordering_preserved(std::span<const double> base, std::span<const double> aug) {
    if (base.size() != aug.size()) {
        throw ContractError("ordering_preserved: lists differ in length");
    }
    if (base.size() < 2) throw ContractError("ordering_preserved: needs at least two losses");
    auto sign = [](double a, double b) { return (a > b) - (a < b); };
    for (std::size_t i = 0; i < base.size(); ++i) {
        for (std::size_t j = i + 1; j < base.size(); ++j) {
            if (sign(base[i], base[j]) != sign(aug[i], aug[j])) return false;
        }
    }
    return true;
}

SelectionBias selection_bias(const SelectionReport& report) {
    if (!report.test_losses) throw ContractError("selection_bias: report has no test losses");
    const auto& test = *report.test_losses;
    const std::size_t best = argmin_lowest(test);
    const double magnitude = test[report.chosen] - test[best];
    return {report.chosen != best, magnitude};
}

std::optional<double> knee_detect(std::span<const double> p_values,
                                  std::span<const double> scores) {
    if (p_values.size() != scores.size()) {
        throw ContractError("knee_detect: p and score lists differ in length");
    }
    if (p_values.size() < 3) throw ContractError("knee_detect: needs at least 3 points");
    for (std::size_t i = 1; i < p_values.size(); ++i) {
        if (!(p_values[i] > p_values[i - 1])) {
            throw ContractError("knee_detect: p values must be strictly increasing");
        }
    }
    const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) return std::nullopt;
    const double p0 = p_values.front();
    const double p_span = p_values.back() - p0;
    const double first = (scores.front() - *lo) / range;
    const double last = (scores.back() - *lo) / range;

    double best_distance = 0.0;
    std::optional<double> knee;
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        const double x = (p_values[i] - p0) / p_span;
        const double y = (scores[i] - *lo) / range;
        const double distance = y - (first + (last - first) * x);
        if (distance > best_distance) {
            best_distance = distance;
            knee = p_values[i];
        }
    }
    if (best_distance < 1e-6) return std::nullopt;
    return knee;
}

}  // namespace transval
