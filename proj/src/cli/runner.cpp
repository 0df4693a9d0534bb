#include "transval/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "transval/data/bias.hpp"
#include "transval/data/idx.hpp"
#include "transval/data/synthetic.hpp"

namespace transval::cli {

namespace {

template <class... Fs>
struct Overload : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overload(Fs...) -> Overload<Fs...>;

}  // namespace

Generator make_generator(const ExperimentConfig& config) {
    return std::visit(Overload{
                          [](const CubicSpec& s) { return cubic_generator(s); },
                          [](const BlobSpec& s) { return blobs_generator(s); },
                          [](const IdxSource&) -> Generator {
                              throw ContractError("idx data has no generator");
                          },
                      },
                      config.data);
}

Dataset generate_data(const ExperimentConfig& config, std::size_t count, const Seed& seed) {
    if (const auto* idx = std::get_if<IdxSource>(&config.data)) {
        const Dataset full = load_idx(idx->images, idx->labels);
        if (count > full.size()) {
            throw SizingError("requested " + std::to_string(count) + " examples, file has " +
                              std::to_string(full.size()));
        }
        std::vector<std::size_t> order(full.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        Stream stream(seed);
        stream.shuffle(std::span<std::size_t>(order));
        order.resize(count);
        return full.subset(order);
    }
    return make_generator(config).sample(count, seed);
}

std::function<Split(std::size_t, const Seed&)> split_source(const ExperimentConfig& config) {
    const SplitSizes sizes = config.split;
    const auto val_bias = config.validation_bias;
    const auto test_bias = config.test_bias;

    std::function<Split(const Seed&)> base;
    if (const auto* idx = std::get_if<IdxSource>(&config.data)) {
        auto full = std::make_shared<const Dataset>(load_idx(idx->images, idx->labels));
        base = [full, sizes](const Seed& seed) {
            return build_split(*full, sizes.train, sizes.validation, sizes.test, seed);
        };
    } else {
        auto gen = std::make_shared<const Generator>(make_generator(config));
        base = [gen, sizes](const Seed& seed) {
            std::optional<Dataset> test;
            if (sizes.test > 0) test = gen->sample(sizes.test, seed.derive("test"));
            return make_split(gen->sample(sizes.train, seed.derive("train")),
                              gen->sample(sizes.validation, seed.derive("validation")),
                              std::move(test));
        };
    }

    return [base, val_bias, test_bias](std::size_t, const Seed& seed) {
        Split split = base(seed);
        if (!val_bias && !test_bias) return split;
        Dataset validation = split.validation;
        std::optional<Dataset> test = split.test;
        if (val_bias) validation = apply_bias(validation, *val_bias, seed.derive("bias-validation"));
        if (test_bias && test) test = apply_bias(*test, *test_bias, seed.derive("bias-test"));
        return make_split(split.train, std::move(validation), std::move(test));
    };
}

SweepSpec make_sweep_spec(const ExperimentConfig& config) {
    SweepSpec spec;
    spec.p_values = config.p_grid;
    spec.models = config.models;
    spec.replications = config.replications;
    spec.procedure = config.procedure;
    spec.loss = config.loss;
    spec.data = split_source(config);
    spec.seed = Seed(config.seed);
    spec.workers = config.workers;
    return spec;
}

double validation_score(double mean_validation_loss, LossKind loss) {
    return loss == LossKind::zero_one ? 1.0 - mean_validation_loss : -mean_validation_loss;
}

ResultRow to_row(const GridCell& cell) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {cell.p,
            cell.model,
            cell.replication,
            cell.error ? nan : cell.validation_loss,
            cell.error ? nan : cell.test_loss,
            cell.leak_count,
            cell.chosen,
            cell.seed.to_string()};
}

ResultTable table_from_sweep(const SweepResult& sweep, const ModelGrid& models, LossKind loss) {
    ResultTable table;
    table.rows.reserve(sweep.cells.size());
    for (const auto& cell : sweep.cells) {
        table.rows.push_back(to_row(cell));
        if (cell.error) table.errors.push_back({cell.seed.to_string(), *cell.error});
    }
    for (std::size_t k = 0; k < models.size(); ++k) table.models.push_back({k, describe(models[k])});
    for (const auto& s : summarize_by_p(sweep)) {
        SelectionRecord rec;
        rec.p = s.p;
        const auto top = std::max_element(s.chosen_counts.begin(), s.chosen_counts.end());
        rec.chosen_model = static_cast<std::size_t>(top - s.chosen_counts.begin());
        rec.chosen_count = *top;
        rec.replications = s.replications;
        rec.mean_val_loss = s.mean_chosen_validation_loss;
        rec.mean_test_loss = s.mean_chosen_test_loss;
        rec.val_score = validation_score(s.mean_chosen_validation_loss, loss);
        rec.bias_rate = s.bias_rate;
        rec.mean_bias_magnitude = s.mean_bias_magnitude;
        table.selection.push_back(rec);
    }
    table.knee = knee_from_table(table);
    return table;
}

std::optional<double> knee_from_table(const ResultTable& table) {
    std::vector<double> ps, scores;
    if (!table.selection.empty()) {
        for (const auto& s : table.selection) {
            ps.push_back(s.p);
            scores.push_back(s.val_score);
        }
    } else {
        // -mean loss is an affine image of either score, so the knee agrees.
        std::vector<std::pair<double, std::pair<double, std::size_t>>> acc;
        for (const auto& r : table.rows) {
            if (!r.chosen || std::isnan(r.val_loss)) continue;
            auto it = std::find_if(acc.begin(), acc.end(),
                                   [&](const auto& a) { return a.first == r.p; });
            if (it == acc.end()) {
                acc.push_back({r.p, {0.0, 0}});
                it = acc.end() - 1;
            }
            it->second.first += r.val_loss;
            ++it->second.second;
        }
        std::sort(acc.begin(), acc.end());
        for (const auto& [p, sum] : acc) {
            ps.push_back(p);
            scores.push_back(-sum.first / static_cast<double>(sum.second));
        }
    }
    if (ps.size() < 3 || !std::is_sorted(ps.begin(), ps.end()) ||
        std::adjacent_find(ps.begin(), ps.end()) != ps.end()) {
        return std::nullopt;
    }
    if (std::any_of(scores.begin(), scores.end(), [](double s) { return !std::isfinite(s); })) {
        return std::nullopt;
    }
    return knee_detect(ps, scores);
}

std::vector<StabilityRecord> StabilityReport::records() const {
    auto rec = [&](const std::string& name, const StabilityEstimate& e) {
        return StabilityRecord{name, n, m, e.trials, e.mean, e.std_error};
    };
    std::vector<StabilityRecord> out{
        rec(to_string(validation.oavs.quantity), validation.oavs),
        rec(to_string(validation.eps1.quantity), validation.eps1),
        rec(to_string(validation.eps2.quantity), validation.eps2),
        rec(to_string(generalization.gap.quantity), generalization.gap),
    };
    out.push_back({"validation-bound", n, m, validation.oavs.trials, validation.bound,
                   validation.combined_std_error});
    out.push_back({"markov-bound", n, m, validation.oavs.trials, markov_bound,
                   std::numeric_limits<double>::quiet_NaN()});
    return out;
}

StabilityReport run_stability(const ExperimentConfig& config) {
    if (!config.stability) throw ContractError("config has no stability section");
    const auto& sc = *config.stability;
    const Generator gen = make_generator(config);
    EstimatorOptions options;
    options.trials = sc.trials;
    options.seed = Seed(config.seed).derive("stability");
    options.workers = config.workers;
    options.risk_sample = sc.risk_sample;

    StabilityReport report;
    report.n = sc.n;
    report.m = sc.m;
    report.validation = check_validation_stability(sc.learner, gen, sc.n, sc.m, options);
    report.generalization = check_generalization(sc.learner, gen, sc.n, options);
    report.markov_bound = markov_confidence_bound(report.validation.oavs.mean, sc.delta);
    return report;
}

ResultTable run_config(const ExperimentConfig& config) {
    const SweepResult sweep = run_sweep(make_sweep_spec(config));
    ResultTable table = table_from_sweep(sweep, config.models, config.loss);
    if (config.stability) table.stability = run_stability(config).records();
    return table;
}

}  // namespace transval::cli
