#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace transval::cli {

inline constexpr std::string_view kResultHeader =
    "p,model_id,replication,val_loss,test_loss,leak_count,chosen,seed_path";

struct ResultRow {
    double p = 0.0;
    std::size_t model_id = 0;
    std::size_t replication = 0;
    double val_loss = 0.0;
    double test_loss = 0.0;
    std::size_t leak_count = 0;
    bool chosen = false;
    std::string seed_path;

    bool operator==(const ResultRow& other) const;
};

struct ModelRecord {
    std::size_t model_id = 0;
    std::string description;
    bool operator==(const ModelRecord&) const = default;
};

struct SelectionRecord {
    double p = 0.0;
    std::size_t chosen_model = 0;  // most frequently chosen, lowest id on ties
    std::size_t chosen_count = 0;
    std::size_t replications = 0;
    double mean_val_loss = 0.0;
    double mean_test_loss = 0.0;
    double val_score = 0.0;  // accuracy for zero-one, -MSE for squared error
    double bias_rate = 0.0;
    double mean_bias_magnitude = 0.0;

    bool operator==(const SelectionRecord& other) const;
};

struct StabilityRecord {
    std::string quantity;
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t trials = 0;
    double mean = 0.0;
    double std_error = 0.0;

    bool operator==(const StabilityRecord& other) const;
};

struct ErrorRecord {
    std::string seed_path;
    std::string message;
    bool operator==(const ErrorRecord&) const = default;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<ModelRecord> models;
    std::vector<SelectionRecord> selection;
    std::optional<double> knee;
    std::vector<StabilityRecord> stability;
    std::vector<ErrorRecord> errors;

    bool operator==(const ResultTable& other) const;
};

/// Header line, one line per row, then footer sections. A table without
/// rows or footer data is just the header.
std::string to_csv(const ResultTable& table);

/// Inverse of to_csv. Throws FormatError on malformed input.
ResultTable parse_csv(std::string_view text);

void write_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable read_csv(const std::filesystem::path& path);

/// Shortest text that round-trips exactly (%.17g, nan/inf spelled out).
std::string format_double(double value);
double parse_double(std::string_view text);

}  // namespace transval::cli
