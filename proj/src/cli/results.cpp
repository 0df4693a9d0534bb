#include "transval/cli/results.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/core.h>

#include "transval/core/error.hpp"

namespace transval::cli {

namespace {

bool same(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

std::string clean(std::string text) {
    for (char& c : text) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

std::vector<std::string> fields(std::string_view line, std::size_t max_fields = 0) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        if (max_fields && out.size() + 1 == max_fields) {
            out.emplace_back(line.substr(start));
            break;
        }
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

std::size_t parse_size(std::string_view text) {
    std::size_t value = 0;
    if (text.empty()) throw FormatError("empty integer field");
    for (char c : text) {
        if (c < '0' || c > '9') throw FormatError("bad integer '" + std::string(text) + "'");
        value = value * 10 + static_cast<std::size_t>(c - '0');
    }
    return value;
}

bool parse_bool(std::string_view text) {
    if (text == "1") return true;
    if (text == "0") return false;
    throw FormatError("bad flag '" + std::string(text) + "'");
}

constexpr std::string_view kModelsHeader = "model_id,description";
constexpr std::string_view kSelectionHeader =
    "p,chosen_model,chosen_count,replications,mean_val_loss,mean_test_loss,val_score,bias_rate,"
    "mean_bias_magnitude";
constexpr std::string_view kStabilityHeader = "quantity,n,m,trials,mean,std_error";
constexpr std::string_view kErrorsHeader = "seed_path,message";

}  // namespace

bool ResultRow::operator==(const ResultRow& o) const {
    return same(p, o.p) && model_id == o.model_id && replication == o.replication &&
           same(val_loss, o.val_loss) && same(test_loss, o.test_loss) &&
           leak_count == o.leak_count && chosen == o.chosen && seed_path == o.seed_path;
}

bool SelectionRecord::operator==(const SelectionRecord& o) const {
    return same(p, o.p) && chosen_model == o.chosen_model && chosen_count == o.chosen_count &&
           replications == o.replications && same(mean_val_loss, o.mean_val_loss) &&
           same(mean_test_loss, o.mean_test_loss) && same(val_score, o.val_score) &&
           same(bias_rate, o.bias_rate) && same(mean_bias_magnitude, o.mean_bias_magnitude);
}

bool StabilityRecord::operator==(const StabilityRecord& o) const {
    return quantity == o.quantity && n == o.n && m == o.m && trials == o.trials &&
           same(mean, o.mean) && same(std_error, o.std_error);
}

bool ResultTable::operator==(const ResultTable& o) const {
    const bool knee_same = knee.has_value() == o.knee.has_value() &&
                           (!knee || same(*knee, *o.knee));
    return rows == o.rows && models == o.models && selection == o.selection && knee_same &&
           stability == o.stability && errors == o.errors;
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", value);
}

double parse_double(std::string_view text) {
    if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    const std::string s(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw FormatError("bad number '" + s + "'");
    }
    return v;
}

std::string to_csv(const ResultTable& table) {
    std::string out(kResultHeader);
    out += '\n';
    for (const auto& r : table.rows) {
        out += fmt::format("{},{},{},{},{},{},{},{}\n", format_double(r.p), r.model_id,
                           r.replication, format_double(r.val_loss), format_double(r.test_loss),
                           r.leak_count, r.chosen ? 1 : 0, r.seed_path);
    }
    const bool footer = !table.models.empty() || !table.selection.empty() || table.knee ||
                        !table.stability.empty() || !table.errors.empty();
    if (!footer) return out;
    out += '\n';
    if (!table.models.empty()) {
        out += "# models\n";
        out += kModelsHeader;
        out += '\n';
        for (const auto& m : table.models) {
            out += fmt::format("{},{}\n", m.model_id, clean(m.description));
        }
    }
    if (!table.selection.empty()) {
        out += "# selection\n";
        out += kSelectionHeader;
        out += '\n';
        for (const auto& s : table.selection) {
            out += fmt::format("{},{},{},{},{},{},{},{},{}\n", format_double(s.p), s.chosen_model,
                               s.chosen_count, s.replications, format_double(s.mean_val_loss),
                               format_double(s.mean_test_loss), format_double(s.val_score),
                               format_double(s.bias_rate), format_double(s.mean_bias_magnitude));
        }
    }
    if (!table.selection.empty() || table.knee) {
        out += "# knee\n";
        out += table.knee ? format_double(*table.knee) : std::string("none");
        out += '\n';
    }
    if (!table.stability.empty()) {
        out += "# stability\n";
        out += kStabilityHeader;
        out += '\n';
        for (const auto& s : table.stability) {
            out += fmt::format("{},{},{},{},{},{}\n", s.quantity, s.n, s.m, s.trials,
                               format_double(s.mean), format_double(s.std_error));
        }
    }
    if (!table.errors.empty()) {
        out += "# errors\n";
        out += kErrorsHeader;
        out += '\n';
        for (const auto& e : table.errors) {
            out += fmt::format("{},{}\n", e.seed_path, clean(e.message));
        }
    }
    return out;
}

ResultTable parse_csv(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    if (lines.empty() || lines[0] != kResultHeader) {
        throw FormatError("results: missing header line");
    }

    ResultTable table;
    std::size_t i = 1;
    for (; i < lines.size() && !lines[i].empty(); ++i) {
        const auto f = fields(lines[i]);
        if (f.size() != 8) {
            throw FormatError(fmt::format("results line {}: expected 8 fields, got {}", i + 1,
                                          f.size()));
        }
        ResultRow r;
        r.p = parse_double(f[0]);
        r.model_id = parse_size(f[1]);
        r.replication = parse_size(f[2]);
        r.val_loss = parse_double(f[3]);
        r.test_loss = parse_double(f[4]);
        r.leak_count = parse_size(f[5]);
        r.chosen = parse_bool(f[6]);
        r.seed_path = f[7];
        table.rows.push_back(std::move(r));
    }

    std::string section;
    auto expect_header = [&](std::string_view header) {
        ++i;
        if (i >= lines.size() || lines[i] != header) {
            throw FormatError("results: section '" + section + "' lacks its header");
        }
    };
    for (++i; i < lines.size(); ++i) {
        const auto line = lines[i];
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            section = std::string(line.substr(2));
            if (section == "models") {
                expect_header(kModelsHeader);
            } else if (section == "selection") {
                expect_header(kSelectionHeader);
            } else if (section == "stability") {
                expect_header(kStabilityHeader);
            } else if (section == "errors") {
                expect_header(kErrorsHeader);
            } else if (section != "knee") {
                throw FormatError("results: unknown section '" + section + "'");
            }
            continue;
        }
        if (section == "models") {
            const auto f = fields(line, 2);
            if (f.size() != 2) throw FormatError("results: bad models line");
            table.models.push_back({parse_size(f[0]), f[1]});
        } else if (section == "selection") {
            const auto f = fields(line);
            if (f.size() != 9) throw FormatError("results: bad selection line");
            table.selection.push_back({parse_double(f[0]), parse_size(f[1]), parse_size(f[2]),
                                       parse_size(f[3]), parse_double(f[4]), parse_double(f[5]),
                                       parse_double(f[6]), parse_double(f[7]),
                                       parse_double(f[8])});
        } else if (section == "knee") {
            if (line != "none") table.knee = parse_double(line);
        } else if (section == "stability") {
            const auto f = fields(line);
            if (f.size() != 6) throw FormatError("results: bad stability line");
            table.stability.push_back({f[0], parse_size(f[1]), parse_size(f[2]),
                                       parse_size(f[3]), parse_double(f[4]),
                                       parse_double(f[5])});
        } else if (section == "errors") {
            const auto f = fields(line, 2);
            if (f.size() != 2) throw FormatError("results: bad errors line");
            table.errors.push_back({f[0], f[1]});
        } else {
            throw FormatError("results: data outside any section");
        }
    }
    return table;
}

void write_csv(const ResultTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_csv(table);
    if (!out) throw IoError("write failed for " + path.string());
}

ResultTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str());
}

}  // namespace transval::cli
