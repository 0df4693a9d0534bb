#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "transval/core/error.hpp"
#include "transval/core/loss.hpp"
#include "transval/core/random.hpp"
#include "transval/core/split.hpp"
#include "transval/learners/learner.hpp"
#include "transval/samplers.hpp"

namespace transval {

/// Candidate models M_1..M_K; selection picks one by validation loss.
using ModelGrid = std::vector<Learner>;

/// A learner failure while fitting or scoring grid entry `model`.
class ModelError : public Error {
public:
    ModelError(std::size_t model, const std::string& what)
        : Error("model " + std::to_string(model) + ": " + what), model_(model) {}
    std::size_t model() const noexcept { return model_; }

private:
    std::size_t model_;
};

struct SelectionReport {
    std::size_t chosen = 0;
    std::vector<double> validation_losses;
    /// Present when the split has a test set.
    std::optional<std::vector<double>> test_losses;
    /// min_selection_gap of the validation losses; +inf for a single model.
    double min_gap = 0.0;
    /// Chosen model differs from the test-optimal one.
    bool bias_flag = false;
};

/// Index of the smallest value; the lowest index wins ties.
std::size_t argmin_lowest(std::span<const double> values);

/// Fits every grid entry on the training set and picks the argmin of the
/// validation loss. Model k is fitted with seed.derive("model", k).
SelectionReport select_model(const ModelGrid& grid, const Dataset& train,
                             const Dataset& validation, const std::optional<Dataset>& test,
                             LossKind loss, const Seed& seed);

SelectionReport select_model(const ModelGrid& grid, const Split& split, LossKind loss,
                             const Seed& seed);

/// Trains on the effective training set, evaluates on the full original V.
SelectionReport select_model(const ModelGrid& grid, const AugmentedSplit& split, LossKind loss,
                             const Seed& seed);

/// True iff every pair (i, j) has the same sign of difference in both lists,
/// with exact equality treated as its own sign.
bool ordering_preserved(std::span<const double> base_losses, std::span<const double> aug_losses);

struct SelectionBias {
    bool flag = false;
    /// Test loss of the chosen model minus that of the test-optimal model.
    double magnitude = 0.0;
};

SelectionBias selection_bias(const SelectionReport& report);

/// p at the knee of a validation-score curve: both axes min-max normalised,
/// the point furthest above the chord from the first to the last point.
/// nullopt when that distance is below 1e-6 or the scores are constant.
std::optional<double> knee_detect(std::span<const double> p_values,
                                  std::span<const double> scores);

enum class Procedure { presample, batch };

const char* to_string(Procedure procedure);
Procedure parse_procedure(std::string_view text);

struct SweepSpec {
    std::vector<double> p_values;
    ModelGrid models;
    std::size_t replications = 1;
    Procedure procedure = Procedure::presample;
    LossKind loss = LossKind::squared_error;
    /// Builds the split for replication r from its seed.
    std::function<Split(std::size_t replication, const Seed& seed)> data;
    Seed seed{};
    std::size_t workers = 1;
};

struct GridCell {
    double p = 0.0;
    std::size_t p_index = 0;
    std::size_t model = 0;
    std::size_t replication = 0;
    double validation_loss = 0.0;
    double test_loss = 0.0;  // NaN without a test set
    /// Presample: leaked validation rows. Batch: distinct V rows trained on.
    std::size_t leak_count = 0;
    bool chosen = false;
    Seed seed{};
    std::optional<std::string> error;
};

struct SweepResult {
    std::vector<double> p_values;
    std::size_t model_count = 0;
    std::size_t replications = 0;
    /// Ordered by (p_index, model, replication).
    std::vector<GridCell> cells;

    std::size_t index(std::size_t p_index, std::size_t model, std::size_t rep) const {
        return (p_index * model_count + model) * replications + rep;
    }
    const GridCell& at(std::size_t p_index, std::size_t model, std::size_t rep) const {
        return cells[index(p_index, model, rep)];
    }
    bool has_errors() const;
};

/// Seeds: replication r uses seed.derive("rep", r); its data come from
/// .derive("data"), leak draws from .derive("leak") (shared by every p), and
/// the cell for (p_index, model) fits with .derive("p", i).derive("model", k).
SweepResult run_sweep(const SweepSpec& spec);

/// Recomputes one cell from its recorded seed path.
GridCell rerun_cell(const SweepSpec& spec, const Seed& cell_seed);

/// Per-p aggregate of a sweep.
struct PSummary {
    double p = 0.0;
    std::vector<std::size_t> chosen_counts;  // per model
    std::size_t replications = 0;            // replications without errors
    double mean_chosen_validation_loss = 0.0;
    double mean_chosen_test_loss = 0.0;      // NaN without test losses
    double bias_rate = 0.0;
    double mean_bias_magnitude = 0.0;
};

std::vector<PSummary> summarize_by_p(const SweepResult& result);

}  // namespace transval
