#include <algorithm>
#include <cmath>
#include <limits>

#include "transval/core/parallel.hpp"
#include "transval/learners/sgd_logistic.hpp"
#include "transval/selection.hpp"

namespace transval {

namespace {

struct Fitted {
    double validation_loss;
    double test_loss;
    std::size_t leak_count;
};

Fitted fit_cell(const SweepSpec& spec, const Split& split, const AugmentedSplit* augmented,
                double p, std::size_t k, const Seed& rep_seed, const Seed& cell_seed) {
    const Learner& learner = spec.models[k];
    if (spec.procedure == Procedure::presample) {
        const FittedModel model = fit(learner, augmented->effective_train, cell_seed);
        return {evaluate(model, split.validation, spec.loss),
                split.test ? evaluate(model, *split.test, spec.loss)
                           : std::numeric_limits<double>::quiet_NaN(),
                augmented->leaked.size()};
    }
    const auto* sgd = std::get_if<SgdParams>(&learner);
    if (!sgd) {
        throw ContractError("batch-sample procedure needs an sgd-logistic model, got " +
                            kind_name(learner));
    }
    validate(learner);
    // The schedule seed ignores p, so source draws are coupled across the p grid.
    const BatchSchedule schedule =
        batch_schedule(split, p, sgd->batch_size, sgd_iterations(*sgd, split.n()),
                       rep_seed.derive("schedule").derive("model", k));
    const FittedModel model = train_sgd_logistic(schedule, split, sgd->learning_rate);
    return {evaluate(model, split.validation, spec.loss),
            split.test ? evaluate(model, *split.test, spec.loss)
                       : std::numeric_limits<double>::quiet_NaN(),
            schedule.distinct_validation_examples()};
}

// Fills the cells of replication `rep` for the listed p indices.
void run_replication(const SweepSpec& spec, std::size_t rep,
                     std::span<const std::size_t> p_indices, std::vector<GridCell>& out) {
    const Seed rep_seed = spec.seed.derive("rep", rep);
    const std::size_t K = spec.models.size();
    std::optional<Split> split;
    std::string data_error;
    try {
        split = spec.data(rep, rep_seed.derive("data"));
    } catch (const std::exception& e) {
        data_error = std::string("data: ") + e.what();
    }
    for (std::size_t pi : p_indices) {
        const double p = spec.p_values[pi];
        const Seed p_seed = rep_seed.derive("p", pi);
        std::optional<AugmentedSplit> augmented;
        std::string leak_error;
        if (split && spec.procedure == Procedure::presample) {
            try {
                augmented = presample(*split, p, rep_seed.derive("leak"));
            } catch (const std::exception& e) {
                leak_error = std::string("presample: ") + e.what();
            }
        }
        std::vector<double> losses(K, std::numeric_limits<double>::infinity());
        bool any_ok = false;
        for (std::size_t k = 0; k < K; ++k) {
            GridCell cell;
            cell.p = p;
            cell.p_index = pi;
            cell.model = k;
            cell.replication = rep;
            cell.seed = p_seed.derive("model", k);
            cell.validation_loss = cell.test_loss = std::numeric_limits<double>::quiet_NaN();
            if (!split) {
                cell.error = data_error;
            } else if (!leak_error.empty()) {
                cell.error = leak_error;
            } else {
                try {
                    const Fitted f = fit_cell(spec, *split, augmented ? &*augmented : nullptr, p,
                                              k, rep_seed, cell.seed);
                    cell.validation_loss = f.validation_loss;
                    cell.test_loss = f.test_loss;
                    cell.leak_count = f.leak_count;
                    losses[k] = f.validation_loss;
                    any_ok = true;
                } catch (const std::exception& e) {
                    cell.error = ModelError(k, e.what()).what();
                }
            }
            out.push_back(std::move(cell));
        }
        if (any_ok) out[out.size() - K + argmin_lowest(losses)].chosen = true;
    }
}

void check_spec(const SweepSpec& spec) {
    if (spec.p_values.empty()) throw ContractError("sweep: empty p grid");
    if (spec.models.empty()) throw ContractError("sweep: empty model grid");
    if (spec.replications < 1) throw ContractError("sweep: replications must be >= 1");
    if (!spec.data) throw ContractError("sweep: no data source");
    for (double p : spec.p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw ContractError("sweep: p = " + std::to_string(p) + " is outside [0, 1]");
        }
    }
}

}  // namespace

const char* to_string(Procedure procedure) {
    return procedure == Procedure::presample ? "presample" : "batch";
}

Procedure parse_procedure(std::string_view text) {
    if (text == "presample") return Procedure::presample;
    if (text == "batch" || text == "batch-sample") return Procedure::batch;
    throw ContractError("unknown procedure '" + std::string(text) + "'");
}

bool SweepResult::has_errors() const {
    return std::any_of(cells.begin(), cells.end(), [](const GridCell& c) { return c.error; });
}

SweepResult run_sweep(const SweepSpec& spec) {
    check_spec(spec);
    const std::size_t P = spec.p_values.size();
    const std::size_t K = spec.models.size();
    const std::size_t R = spec.replications;
    SweepResult result{spec.p_values, K, R, std::vector<GridCell>(P * K * R)};

    std::vector<std::size_t> all_p(P);
    for (std::size_t i = 0; i < P; ++i) all_p[i] = i;
    parallel_for(R, spec.workers, [&](std::size_t rep) {
        std::vector<GridCell> cells;
        cells.reserve(P * K);
        run_replication(spec, rep, all_p, cells);
        for (GridCell& cell : cells) {
            const std::size_t slot = result.index(cell.p_index, cell.model, rep);
            result.cells[slot] = std::move(cell);
        }
    });
    return result;
}

GridCell rerun_cell(const SweepSpec& spec, const Seed& cell_seed) {
    check_spec(spec);
    const auto& path = cell_seed.path();
    if (cell_seed.master() != spec.seed.master() || path.size() != spec.seed.path().size() + 3 ||
        !std::equal(spec.seed.path().begin(), spec.seed.path().end(), path.begin())) {
        throw ContractError("rerun_cell: seed path " + cell_seed.to_string() +
                            " does not belong to this sweep");
    }
    const auto& rep = path[path.size() - 3];
    const auto& p = path[path.size() - 2];
    const auto& model = path[path.size() - 1];
    if (rep.first != "rep" || p.first != "p" || model.first != "model" ||
        rep.second >= spec.replications || p.second >= spec.p_values.size() ||
        model.second >= spec.models.size()) {
        throw ContractError("rerun_cell: malformed cell seed path " + cell_seed.to_string());
    }
    std::vector<GridCell> cells;
    const std::size_t p_index = p.second;
    run_replication(spec, rep.second, std::span<const std::size_t>(&p_index, 1), cells);
    return cells[model.second];
}

std::vector<PSummary> summarize_by_p(const SweepResult& result) {
    std::vector<PSummary> out;
    for (std::size_t pi = 0; pi < result.p_values.size(); ++pi) {
        PSummary s;
        s.p = result.p_values[pi];
        s.chosen_counts.assign(result.model_count, 0);
        double val_sum = 0.0, test_sum = 0.0, bias_sum = 0.0;
        std::size_t biased = 0;
        bool have_test = true;
        for (std::size_t r = 0; r < result.replications; ++r) {
            std::optional<std::size_t> chosen;
            std::vector<double> test(result.model_count);
            bool ok = true;
            for (std::size_t k = 0; k < result.model_count; ++k) {
                const GridCell& c = result.at(pi, k, r);
                if (c.error) ok = false;
                if (c.chosen) chosen = k;
                test[k] = c.test_loss;
                if (std::isnan(c.test_loss)) have_test = false;
            }
            if (!ok || !chosen) continue;
            ++s.replications;
            ++s.chosen_counts[*chosen];
            val_sum += result.at(pi, *chosen, r).validation_loss;
            if (have_test) {
                test_sum += test[*chosen];
                const std::size_t best = argmin_lowest(test);
                if (best != *chosen) ++biased;
                bias_sum += test[*chosen] - test[best];
            }
        }
        const double n = static_cast<double>(s.replications);
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.mean_chosen_validation_loss = s.replications ? val_sum / n : nan;
        s.mean_chosen_test_loss = (s.replications && have_test) ? test_sum / n : nan;
        s.bias_rate = (s.replications && have_test) ? static_cast<double>(biased) / n : nan;
        s.mean_bias_magnitude = (s.replications && have_test) ? bias_sum / n : nan;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace transval
