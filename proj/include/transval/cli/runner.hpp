#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "transval/cli/config.hpp"
#include "transval/cli/results.hpp"
#include "transval/core/split.hpp"
#include "transval/selection.hpp"
#include "transval/stability.hpp"

namespace transval::cli {

/// Per-replication split source for a config: fresh draws for generators,
/// a random partition of the loaded file for IDX. Bias is applied after.
std::function<Split(std::size_t, const Seed&)> split_source(const ExperimentConfig& config);

SweepSpec make_sweep_spec(const ExperimentConfig& config);

/// Draws `count` examples from the configured source (no split, no bias).
Dataset generate_data(const ExperimentConfig& config, std::size_t count, const Seed& seed);

Generator make_generator(const ExperimentConfig& config);

/// Score used for the knee: accuracy under zero-one loss, -MSE otherwise.
double validation_score(double mean_validation_loss, LossKind loss);

ResultTable table_from_sweep(const SweepResult& sweep, const ModelGrid& models, LossKind loss);

/// Knee over the selection footer, or over the chosen rows when the footer
/// is absent. None if fewer than 3 p values or no clear knee.
std::optional<double> knee_from_table(const ResultTable& table);

struct StabilityReport {
    ValidationStabilityCheck validation;
    GeneralizationCheck generalization;
    double markov_bound = 0.0;  // OAVS / delta
    std::size_t n = 0;
    std::size_t m = 0;

    std::vector<StabilityRecord> records() const;
};

StabilityReport run_stability(const ExperimentConfig& config);

/// Full sweep plus footers (and stability when configured).
ResultTable run_config(const ExperimentConfig& config);

ResultRow to_row(const GridCell& cell);

}  // namespace transval::cli
