#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "transval/core/error.hpp"
#include "transval/core/loss.hpp"
#include "transval/data/bias.hpp"
#include "transval/data/synthetic.hpp"
#include "transval/learners/learner.hpp"
#include "transval/selection.hpp"

namespace transval::cli {

/// Invalid configuration; carries every offending key.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

struct IdxSource {
    std::filesystem::path images;
    std::filesystem::path labels;
};

using DataSource = std::variant<CubicSpec, BlobSpec, IdxSource>;

struct SplitSizes {
    std::size_t train = 10;
    std::size_t validation = 5;
    std::size_t test = 0;
};

struct StabilityConfig {
    Learner learner = PolyRegParams{3, 1.0};
    std::size_t n = 20;
    std::size_t m = 5;
    std::size_t trials = 2000;
    double delta = 0.1;
    std::size_t risk_sample = 10000;
};

struct ExperimentConfig {
    DataSource data = CubicSpec{};
    SplitSizes split;
    std::optional<BiasSpec> validation_bias;
    std::optional<BiasSpec> test_bias;
    Procedure procedure = Procedure::presample;
    std::vector<double> p_grid{0.0};
    ModelGrid models;
    LossKind loss = LossKind::squared_error;
    std::size_t replications = 1;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    std::optional<std::filesystem::path> output;
    std::optional<StabilityConfig> stability;
    /// Non-fatal notes gathered during validation (e.g. clamped p equivalents).
    std::vector<std::string> warnings;
};

/// Parses and validates a JSON config. Throws ConfigError listing every
/// offending key ("split.validation: must be >= 1", ...).
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Re-checks an in-memory config (after CLI overrides).
void validate_config(ExperimentConfig& config);

TaskKind data_task(const DataSource& source);

}  // namespace transval::cli
