// transval: command-line front end for validation-leakage sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/core.h>

#include "CLI11.hpp"

#include "transval/cli/config.hpp"
#include "transval/cli/results.hpp"
#include "transval/cli/runner.hpp"
#include "transval/data/idx.hpp"
#include "transval/version.hpp"

namespace tv = transval;
namespace cli = transval::cli;

namespace {

enum Exit { ok = 0, failure = 1, config_error = 2, cell_error = 3, io_error = 4 };

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers;
    std::optional<std::string> procedure;
};

cli::ExperimentConfig load(const std::string& path, const Overrides& o) {
    auto config = cli::load_config(path);
    if (o.seed) config.seed = *o.seed;
    if (o.workers) config.workers = *o.workers;
    if (o.procedure) {
        try {
            config.procedure = tv::parse_procedure(*o.procedure);
        } catch (const tv::ContractError&) {
            throw cli::ConfigError({"--procedure: must be presample or batch"});
        }
    }
    cli::validate_config(config);
    for (const auto& w : config.warnings) std::cerr << "warning: " << w << '\n';
    return config;
}

void emit(const std::string& text, const std::optional<std::string>& out) {
    if (!out) {
        std::cout << text;
        return;
    }
    std::ofstream file(*out, std::ios::binary);
    if (!file) throw tv::IoError("cannot write " + *out);
    file << text;
    if (!file) throw tv::IoError("write failed for " + *out);
}

int run_sweep_cmd(const std::string& config_path, std::optional<std::string> out,
                  const Overrides& o, const std::optional<std::string>& cell) {
    const auto config = load(config_path, o);
    if (cell) {
        const auto spec = cli::make_sweep_spec(config);
        const auto result = tv::rerun_cell(spec, tv::Seed::parse(*cell));
        cli::ResultTable table;
        table.rows.push_back(cli::to_row(result));
        if (result.error) table.errors.push_back({result.seed.to_string(), *result.error});
        emit(cli::to_csv(table), out);
        return result.error ? cell_error : ok;
    }
    if (!out && config.output) out = config.output->string();
    const auto table = cli::run_config(config);
    emit(cli::to_csv(table), out);
    for (const auto& e : table.errors) std::cerr << "cell " << e.seed_path << ": " << e.message << '\n';
    return table.errors.empty() ? ok : cell_error;
}

int run_stability_cmd(const std::string& config_path, const std::optional<std::string>& out,
                      const Overrides& o) {
    const auto config = load(config_path, o);
    if (!config.stability) throw cli::ConfigError({"stability: section is required"});
    const auto report = cli::run_stability(config);
    cli::ResultTable table;
    table.stability = report.records();
    emit(cli::to_csv(table), out);
    std::cerr << fmt::format(
        "validation bound: OAVS {:.6g} <= {:.6g} ({})\n"
        "generalization: gap {:.6g} <= OAROS {:.6g} ({})\n",
        report.validation.oavs.mean, report.validation.bound,
        report.validation.holds ? "holds" : "violated", report.generalization.gap.mean,
        report.generalization.oaros.mean, report.generalization.holds ? "holds" : "violated");
    return ok;
}

int run_knee_cmd(const std::string& input) {
    const auto table = cli::read_csv(input);
    const auto knee = cli::knee_from_table(table);
    std::cout << (knee ? cli::format_double(*knee) : std::string("none")) << '\n';
    return ok;
}

int run_gen_data_cmd(const std::string& config_path, const std::string& out, std::size_t count,
                     const std::string& format, const Overrides& o, std::size_t rows) {
    const auto config = load(config_path, o);
    const auto data = cli::generate_data(config, count, tv::Seed(config.seed).derive("gen-data"));
    if (format == "idx") {
        if (data.task() != tv::TaskKind::classification) {
            throw cli::ConfigError({"--format: idx output needs classification data"});
        }
        const std::size_t r = rows ? rows : 1;
        if (data.dim() % r != 0) {
            throw cli::ConfigError({"--rows: does not divide the feature dimension"});
        }
        const auto images = tv::dataset_to_idx_images(data, static_cast<std::uint32_t>(r),
                                                      static_cast<std::uint32_t>(data.dim() / r));
        tv::write_file_bytes(out + "-images-idx3-ubyte", tv::encode_idx_images(images));
        tv::write_file_bytes(out + "-labels-idx1-ubyte",
                             tv::encode_idx_labels(tv::dataset_to_idx_labels(data)));
        return ok;
    }
    std::string text;
    for (std::size_t j = 0; j < data.dim(); ++j) text += fmt::format("x{},", j);
    text += "y\n";
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (double v : data.row(i)) text += cli::format_double(v) + ",";
        text += cli::format_double(data.target(i)) + "\n";
    }
    emit(text, out == "-" ? std::nullopt : std::optional<std::string>(out));
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transval: model selection under validation leakage"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out;
    Overrides o;
    std::optional<std::string> cell;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment config (JSON)")
            ->required();
        sub->add_option("--seed", o.seed, "override the master seed");
        sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* sweep = app.add_subcommand("sweep", "run the p x model x replication grid");
    add_common(sweep);
    sweep->add_option("--out", out, "output CSV (default: config output or stdout)");
    sweep->add_option("--procedure", o.procedure, "presample or batch");
    sweep->add_option("--cell", cell, "re-run a single cell from its seed path");

    auto* stability = app.add_subcommand("stability", "estimate stability quantities and bounds");
    add_common(stability);
    stability->add_option("--out", out, "output CSV (default stdout)");

    std::string knee_input;
    auto* knee = app.add_subcommand("knee", "knee p from a results CSV");
    knee->add_option("results", knee_input, "results CSV")->required();

    std::string data_out = "-";
    std::size_t count = 100;
    std::string format = "csv";
    std::size_t rows = 0;
    auto* gen = app.add_subcommand("gen-data", "draw examples from the configured source");
    add_common(gen);
    gen->add_option("--out", data_out, "CSV path ('-' for stdout) or IDX path prefix");
    gen->add_option("--count", count, "number of examples")->check(CLI::PositiveNumber);
    gen->add_option("--format", format, "csv or idx")->check(CLI::IsMember({"csv", "idx"}));
    gen->add_option("--rows", rows, "image rows for idx output (default 1)");

    auto* version = app.add_subcommand("version", "print the version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*sweep) return run_sweep_cmd(config_path, out, o, cell);
        if (*stability) return run_stability_cmd(config_path, out, o);
        if (*knee) return run_knee_cmd(knee_input);
        if (*gen) return run_gen_data_cmd(config_path, data_out, count, format, o, rows);
        if (*version) {
            std::cout << "transval " << tv::kVersion << '\n';
            return ok;
        }
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& p : e.problems()) std::cerr << "  " << p << '\n';
        return config_error;
    } catch (const tv::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return io_error;
    } catch (const tv::FormatError& e) {
        std::cerr << "format error: " << e.what() << '\n';
        return io_error;
    } catch (const tv::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
    return failure;
}
