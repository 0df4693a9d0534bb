#include "transval/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "transval/samplers.hpp"

namespace transval::cli {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += "; ";
        out += s;
    }
    return out;
}

// Collects problems instead of throwing at the first one.
class Reader {
public:
    std::vector<std::string> problems;

    void problem(const std::string& key, const std::string& message) {
        problems.push_back(key + ": " + message);
    }

    void only_keys(const json& obj, const std::string& prefix,
                   std::initializer_list<const char*> allowed) {
        if (!obj.is_object()) return;
        std::set<std::string> names(allowed.begin(), allowed.end());
        for (const auto& [key, value] : obj.items()) {
            if (!names.count(key)) problem(prefix + key, "unknown key");
        }
    }

    template <class T>
    std::optional<T> get(const json& obj, const char* key, const std::string& prefix) {
        if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
        try {
            return obj.at(key).get<T>();
        } catch (const json::exception&) {
            problem(prefix + key, "has the wrong type");
            return std::nullopt;
        }
    }

    template <class T>
    T get_or(const json& obj, const char* key, const std::string& prefix, T fallback) {
        auto v = get<T>(obj, key, prefix);
        return v ? *v : fallback;
    }

    std::size_t count(const json& obj, const char* key, const std::string& prefix,
                      std::size_t fallback) {
        if (!obj.is_object() || !obj.contains(key)) return fallback;
        const json& v = obj.at(key);
        if (!v.is_number_integer() || v.get<long long>() < 0) {
            problem(prefix + key, "must be a non-negative integer");
            return fallback;
        }
        return v.get<std::size_t>();
    }
};

Learner parse_learner(Reader& r, const json& j, const std::string& prefix) {
    if (!j.is_object()) {
        r.problem(prefix, "must be an object");
        return ConstantParams{};
    }
    const std::string kind = r.get_or<std::string>(j, "kind", prefix, "");
    Learner learner = ConstantParams{};
    if (kind == "polyreg") {
        r.only_keys(j, prefix, {"kind", "degree", "ridge"});
        learner = PolyRegParams{r.count(j, "degree", prefix, 1),
                                r.get_or<double>(j, "ridge", prefix, 1e-8)};
    } else if (kind == "knn") {
        r.only_keys(j, prefix, {"kind", "k"});
        learner = KnnParams{r.count(j, "k", prefix, 1)};
    } else if (kind == "svm-rbf") {
        r.only_keys(j, prefix, {"kind", "gamma", "C", "tolerance", "max_iterations"});
        SvmParams p;
        p.gamma = r.get_or<double>(j, "gamma", prefix, p.gamma);
        p.C = r.get_or<double>(j, "C", prefix, p.C);
        p.tolerance = r.get_or<double>(j, "tolerance", prefix, p.tolerance);
        p.max_iterations = r.count(j, "max_iterations", prefix, p.max_iterations);
        learner = p;
    } else if (kind == "sgd-logistic") {
        r.only_keys(j, prefix, {"kind", "learning_rate", "epochs", "batch_size"});
        SgdParams p;
        p.learning_rate = r.get_or<double>(j, "learning_rate", prefix, p.learning_rate);
        p.epochs = r.count(j, "epochs", prefix, p.epochs);
        p.batch_size = r.count(j, "batch_size", prefix, p.batch_size);
        learner = p;
    } else if (kind == "constant") {
        r.only_keys(j, prefix, {"kind", "value"});
        learner = ConstantParams{r.get_or<double>(j, "value", prefix, 0.0)};
    } else {
        r.problem(prefix + "kind",
                  "must be one of polyreg, knn, svm-rbf, sgd-logistic, constant (got '" + kind +
                      "')");
        return learner;
    }
    try {
        validate(learner);
    } catch (const ContractError& e) {
        r.problem(prefix, e.what());
    }
    return learner;
}

DataSource parse_data(Reader& r, const json& j) {
    const std::string prefix = "data.";
    if (!j.is_object()) {
        r.problem("data", "must be an object");
        return CubicSpec{};
    }
    const std::string generator = r.get_or<std::string>(j, "generator", prefix, "cubic");
    if (generator == "cubic") {
        r.only_keys(j, prefix, {"generator", "coefficients", "x_range", "noise_sigma"});
        CubicSpec spec;
        if (auto c = r.get<std::vector<double>>(j, "coefficients", prefix)) {
            if (c->size() != 4) {
                r.problem(prefix + "coefficients", "needs exactly 4 values (a, b, c, d)");
            } else {
                std::copy(c->begin(), c->end(), spec.coefficients.begin());
            }
        }
        if (auto range = r.get<std::vector<double>>(j, "x_range", prefix)) {
            if (range->size() != 2) {
                r.problem(prefix + "x_range", "needs exactly 2 values");
            } else {
                spec.x_min = (*range)[0];
                spec.x_max = (*range)[1];
            }
        }
        spec.noise_sigma = r.get_or<double>(j, "noise_sigma", prefix, spec.noise_sigma);
        try {
            spec.validate();
        } catch (const ContractError& e) {
            r.problem("data", e.what());
        }
        return spec;
    }
    if (generator == "blobs") {
        r.only_keys(j, prefix, {"generator", "classes", "dim", "separation"});
        BlobSpec spec;
        spec.classes = r.count(j, "classes", prefix, spec.classes);
        spec.dim = r.count(j, "dim", prefix, spec.dim);
        spec.separation = r.get_or<double>(j, "separation", prefix, spec.separation);
        if (spec.classes < 2) r.problem(prefix + "classes", "must be >= 2");
        if (spec.dim < 1) r.problem(prefix + "dim", "must be >= 1");
        return spec;
    }
    if (generator == "idx") {
        r.only_keys(j, prefix, {"generator", "images", "labels"});
        auto images = r.get<std::string>(j, "images", prefix);
        auto labels = r.get<std::string>(j, "labels", prefix);
        if (!images) r.problem(prefix + "images", "is required for idx data");
        if (!labels) r.problem(prefix + "labels", "is required for idx data");
        return IdxSource{images.value_or(""), labels.value_or("")};
    }
    r.problem(prefix + "generator", "must be one of cubic, blobs, idx (got '" + generator + "')");
    return CubicSpec{};
}

std::optional<BiasSpec> parse_bias(Reader& r, const json& j, const std::string& prefix,
                                   const DataSource& data) {
    if (j.is_null()) return std::nullopt;
    const bool regression = data_task(data) == TaskKind::regression;
    if (j.is_string()) {
        if (j.get<std::string>() != "default") {
            r.problem(prefix, "string form must be \"default\"");
            return std::nullopt;
        }
        if (!regression) {
            r.problem(prefix, "\"default\" bias exists only for cubic data");
            return std::nullopt;
        }
        return BiasSpec{default_regression_bias(std::get<CubicSpec>(data)), std::nullopt};
    }
    if (!j.is_object()) {
        r.problem(prefix, "must be \"default\" or an object");
        return std::nullopt;
    }
    if (regression) {
        r.only_keys(j, prefix + ".", {"coefficient_deltas"});
        const auto& base = std::get<CubicSpec>(data);
        RegressionBias bias{base, base};
        if (auto d = r.get<std::vector<double>>(j, "coefficient_deltas", prefix + ".")) {
            if (d->size() != 4) {
                r.problem(prefix + ".coefficient_deltas", "needs exactly 4 values");
            } else {
                for (std::size_t i = 0; i < 4; ++i) bias.shifted.coefficients[i] += (*d)[i];
            }
        }
        return BiasSpec{bias, std::nullopt};
    }
    r.only_keys(j, prefix + ".", {"priors", "flips", "flip_probability", "image_width"});
    ClassificationBias bias;
    bias.priors = r.get_or<std::vector<double>>(j, "priors", prefix + ".", {});
    bias.flip_probability = r.get_or<double>(j, "flip_probability", prefix + ".", 0.5);
    bias.image_width = r.count(j, "image_width", prefix + ".", 0);
    for (const auto& name : r.get_or<std::vector<std::string>>(j, "flips", prefix + ".", {})) {
        if (name == "reverse") {
            bias.flips.push_back(FeatureFlip::reverse);
        } else if (name == "left-right") {
            bias.flips.push_back(FeatureFlip::left_right);
        } else if (name == "up-down") {
            bias.flips.push_back(FeatureFlip::up_down);
        } else {
            r.problem(prefix + ".flips", "unknown flip '" + name + "'");
        }
    }
    return BiasSpec{std::nullopt, bias};
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error("invalid config: " + join(problems)), problems_(std::move(problems)) {}

TaskKind data_task(const DataSource& source) {
    return std::holds_alternative<CubicSpec>(source) ? TaskKind::regression
                                                     : TaskKind::classification;
}

void validate_config(ExperimentConfig& config) {
    std::vector<std::string> problems;
    auto problem = [&](const std::string& key, const std::string& msg) {
        problems.push_back(key + ": " + msg);
    };
    if (config.split.train < 1) problem("split.train", "must be >= 1");
    if (config.split.validation < 1) problem("split.validation", "must be >= 1");
    if (config.replications < 1) problem("replications", "must be >= 1");
    if (config.workers < 1) problem("workers", "must be >= 1");
    if (config.p_grid.empty()) problem("p_grid", "must list at least one p");
    for (std::size_t i = 0; i < config.p_grid.size(); ++i) {
        const double p = config.p_grid[i];
        if (!(p >= 0.0 && p <= 1.0)) {
            problem("p_grid[" + std::to_string(i) + "]",
                    "p = " + std::to_string(p) + " is outside [0, 1]");
        }
    }
    if (config.models.empty()) problem("models", "must list at least one model");
    const TaskKind task = data_task(config.data);
    if (task_of(config.loss) != task) {
        problem("loss", std::string(to_string(config.loss)) + " does not fit " +
                            to_string(task) + " data");
    }
    for (std::size_t k = 0; k < config.models.size(); ++k) {
        const auto t = learner_task(config.models[k]);
        if (t && *t != task) {
            problem("models[" + std::to_string(k) + "]",
                    kind_name(config.models[k]) + " does not fit " + to_string(task) + " data");
        }
        if (config.procedure == Procedure::batch &&
            !std::holds_alternative<SgdParams>(config.models[k])) {
            problem("models[" + std::to_string(k) + "]",
                    "batch procedure needs sgd-logistic models");
        }
    }
    if (config.stability) {
        if (std::holds_alternative<IdxSource>(config.data)) {
            problem("stability", "needs a generator data source, not idx");
        }
        const auto t = learner_task(config.stability->learner);
        if (t && *t != task) problem("stability.learner", "does not fit the data task");
        if (config.stability->trials < 2) problem("stability.trials", "must be >= 2");
        if (config.stability->n < 1) problem("stability.n", "must be >= 1");
        if (config.stability->m < 1) problem("stability.m", "must be >= 1");
        if (!(config.stability->delta > 0.0 && config.stability->delta <= 1.0)) {
            problem("stability.delta", "must be in (0, 1]");
        }
    }
    if (!problems.empty()) throw ConfigError(std::move(problems));

    config.warnings.clear();
    if (config.procedure == Procedure::batch) {
        for (double p : config.p_grid) {
            const auto eq = equivalent_presample_p(p, config.split.train, config.split.validation);
            if (eq.clamped) {
                config.warnings.push_back("batch p = " + std::to_string(p) +
                                          " corresponds to presample p = " +
                                          std::to_string(eq.raw) + " (> 1, clamped)");
            }
        }
    }
}

ExperimentConfig parse_config(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("<document>: ") + e.what()});
    }
    if (!j.is_object()) throw ConfigError({"<document>: top level must be an object"});

    Reader r;
    r.only_keys(j, "", {"data", "split", "bias", "procedure", "p_grid", "models", "loss",
                        "replications", "seed", "workers", "output", "stability"});
    ExperimentConfig config;
    config.data = parse_data(r, j.value("data", json::object()));

    const json split = j.value("split", json::object());
    r.only_keys(split, "split.", {"train", "validation", "test"});
    config.split.train = r.count(split, "train", "split.", config.split.train);
    config.split.validation = r.count(split, "validation", "split.", config.split.validation);
    config.split.test = r.count(split, "test", "split.", config.split.test);

    if (j.contains("bias")) {
        const json& bias = j.at("bias");
        r.only_keys(bias, "bias.", {"validation", "test"});
        if (!bias.is_object()) {
            r.problem("bias", "must be an object with validation/test entries");
        } else {
            config.validation_bias =
                parse_bias(r, bias.value("validation", json()), "bias.validation", config.data);
            config.test_bias = parse_bias(r, bias.value("test", json()), "bias.test", config.data);
        }
    }

    try {
        config.procedure = parse_procedure(r.get_or<std::string>(j, "procedure", "", "presample"));
    } catch (const ContractError&) {
        r.problem("procedure", "must be presample or batch");
    }
    config.p_grid = r.get_or<std::vector<double>>(j, "p_grid", "", config.p_grid);

    if (j.contains("models")) {
        if (!j.at("models").is_array()) {
            r.problem("models", "must be an array");
        } else {
            for (std::size_t k = 0; k < j.at("models").size(); ++k) {
                config.models.push_back(
                    parse_learner(r, j.at("models")[k], "models[" + std::to_string(k) + "]."));
            }
        }
    }
    const bool regression = data_task(config.data) == TaskKind::regression;
    try {
        config.loss = parse_loss_kind(
            r.get_or<std::string>(j, "loss", "", regression ? "squared-error" : "zero-one"));
    } catch (const ContractError&) {
        r.problem("loss", "must be zero-one or squared-error");
    }
    config.replications = r.count(j, "replications", "", config.replications);
    config.seed = r.get_or<std::uint64_t>(j, "seed", "", config.seed);
    config.workers = r.count(j, "workers", "", config.workers);
    if (auto out = r.get<std::string>(j, "output", "")) config.output = *out;

    if (j.contains("stability")) {
        const json& s = j.at("stability");
        r.only_keys(s, "stability.", {"learner", "n", "m", "trials", "delta", "risk_sample"});
        StabilityConfig sc;
        if (s.is_object() && s.contains("learner")) {
            sc.learner = parse_learner(r, s.at("learner"), "stability.learner.");
        }
        sc.n = r.count(s, "n", "stability.", sc.n);
        sc.m = r.count(s, "m", "stability.", sc.m);
        sc.trials = r.count(s, "trials", "stability.", sc.trials);
        sc.delta = r.get_or<double>(s, "delta", "stability.", sc.delta);
        sc.risk_sample = r.count(s, "risk_sample", "stability.", sc.risk_sample);
        config.stability = sc;
    }

    try {
        validate_config(config);
    } catch (const ConfigError& e) {
        r.problems.insert(r.problems.end(), e.problems().begin(), e.problems().end());
    }
    if (!r.problems.empty()) throw ConfigError(std::move(r.problems));
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace transval::cli
