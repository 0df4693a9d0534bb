// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "enumeration.hpp"
#include "oracles.hpp"

#include "transval/cli/config.hpp"
#include "transval/cli/results.hpp"
#include "transval/cli/runner.hpp"
#include "transval/core/stats.hpp"
#include "transval/data/idx.hpp"
#include "transval/data/synthetic.hpp"
#include "transval/samplers.hpp"
#include "transval/selection.hpp"
#include "transval/stability.hpp"

using namespace transval;

namespace {

// Pinned tolerances.
constexpr double kSelectionRate = 0.95;      // C1
constexpr double kSigmaMargin = 2.0;         // C1, C9
constexpr double kC1Seconds = 60.0;
constexpr double kChi2Df4At99 = 13.2767;     // chi-square critical value, 4 dof, 99%
constexpr double kInclusionLo = 0.29, kInclusionHi = 0.31;
constexpr double kBatchLo = 0.245, kBatchHi = 0.255;
constexpr double kC2Seconds = 10.0;
constexpr double kOracleSigmas = 3.0;        // C4, C5, C6
constexpr double kC4Seconds = 30.0;
constexpr double kOrderingRate = 0.99;       // C7
constexpr double kKneeGridSteps = 1.0;       // C8

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

cli::ExperimentConfig appendix_config(std::vector<double> p_grid, std::size_t test,
                                      std::uint64_t seed) {
    cli::ExperimentConfig c;
    c.data = CubicSpec{};
    c.split = {10, 5, test};
    c.p_grid = std::move(p_grid);
    c.models = {PolyRegParams{1}, PolyRegParams{2}, PolyRegParams{3}};
    c.loss = LossKind::squared_error;
    c.replications = 200;
    c.seed = seed;
    cli::validate_config(c);
    return c;
}

// Chosen-model loss per replication at p index `pi`.
std::vector<double> chosen_losses(const SweepResult& r, std::size_t pi, bool test) {
    std::vector<double> out;
    for (std::size_t rep = 0; rep < r.replications; ++rep) {
        for (std::size_t k = 0; k < r.model_count; ++k) {
            const GridCell& c = r.at(pi, k, rep);
            if (c.chosen) out.push_back(test ? c.test_loss : c.validation_loss);
        }
    }
    return out;
}

std::vector<double> minus(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

Outcome c1_appendix() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto config = appendix_config({0.0, 0.25, 0.5, 0.75, 1.0}, 0, 101);
    const SweepResult r = run_sweep(cli::make_sweep_spec(config));
    double worst_rate = 1.0;
    for (const auto& s : summarize_by_p(r)) {
        worst_rate = std::min(worst_rate, double(s.chosen_counts[2]) / double(s.replications));
    }
    const auto v0 = mean_and_error(chosen_losses(r, 0, false));
    const auto v1 = mean_and_error(chosen_losses(r, 4, false));
    const double se = std::hypot(v0.std_error, v1.std_error);
    const double drop = v0.mean - v1.mean;
    const double secs = seconds_since(t0);
    const bool pass = worst_rate >= kSelectionRate && drop > kSigmaMargin * se && secs < kC1Seconds;
    return {pass, fmt::format("degree-3 rate min over p {:.3f} (>= {}); val MSE p=0 {:.4f} -> p=1 "
                              "{:.4f}, drop {:.4f} vs {}*SE {:.4f}; {:.2f}s (< {}s)",
                              worst_rate, kSelectionRate, v0.mean, v1.mean, drop, kSigmaMargin,
                              kSigmaMargin * se, secs, kC1Seconds)};
}

Outcome c2_samplers() {
    const auto t0 = std::chrono::steady_clock::now();
    const Split split = make_split(gen_cubic(CubicSpec{}, 6, Seed(1)), gen_cubic(CubicSpec{}, 4, Seed(2)));
    const int seeds = 100000;
    const double p = 0.3;
    std::vector<double> hist(5, 0.0), inclusion(4, 0.0);
    for (int s = 0; s < seeds; ++s) {
        const auto a = presample(split, p, Seed(202).derive("seed", s));
        hist[a.leaked.size()] += 1;
        for (auto i : a.leaked) inclusion[i] += 1;
    }
    double chi2 = 0;
    for (int k = 0; k <= 4; ++k) {
        const double binom = std::tgamma(5) / (std::tgamma(k + 1) * std::tgamma(5 - k)) *
                             std::pow(p, k) * std::pow(1 - p, 4 - k);
        const double expected = binom * seeds;
        chi2 += (hist[k] - expected) * (hist[k] - expected) / expected;
    }
    double lo = 1, hi = 0;
    for (double c : inclusion) {
        lo = std::min(lo, c / seeds);
        hi = std::max(hi, c / seeds);
    }
    const auto sched = batch_schedule(16, 16, 0.25, 4, 100000, Seed(203));
    const double vfrac = double(sched.validation_batches()) / 100000.0;
    const double secs = seconds_since(t0);
    const bool pass = chi2 < kChi2Df4At99 && lo >= kInclusionLo && hi <= kInclusionHi &&
                      vfrac >= kBatchLo && vfrac <= kBatchHi && secs < kC2Seconds;
    return {pass, fmt::format("chi2 {:.3f} (< {}); inclusion [{:.4f}, {:.4f}] within [{}, {}]; "
                              "V-batch fraction {:.4f} within [{}, {}]; {:.2f}s (< {}s)",
                              chi2, kChi2Df4At99, lo, hi, kInclusionLo, kInclusionHi, vfrac,
                              kBatchLo, kBatchHi, secs, kC2Seconds)};
}

Outcome c3_p_zero() {
    struct Family {
        const char* name;
        ModelGrid grid;
        bool regression;
    };
    const std::vector<Family> families{
        {"polyreg", {PolyRegParams{1}, PolyRegParams{2}, PolyRegParams{3}}, true},
        {"constant", {ConstantParams{0.0}, ConstantParams{1.0}}, true},
        {"knn", {KnnParams{1}, KnnParams{3}, KnnParams{5}}, false},
        {"svm-rbf", {SvmParams{0.5, 1.0}, SvmParams{2.0, 10.0}}, false},
        {"sgd-logistic", {SgdParams{0.1, 3, 4}, SgdParams{0.5, 3, 4}}, false},
    };
    std::size_t checked = 0, identical = 0;
    std::string failed;
    for (const auto& f : families) {
        for (std::uint64_t r = 0; r < 20; ++r) {
            const Seed seed = Seed(303).derive(f.name).derive("rep", r);
            Split split = f.regression
                              ? make_split(gen_cubic(CubicSpec{}, 10, seed.derive("t")),
                                           gen_cubic(CubicSpec{}, 5, seed.derive("v")),
                                           gen_cubic(CubicSpec{}, 50, seed.derive("x")))
                              : make_split(gen_blobs(BlobSpec{3, 2, 2.0}, 8, seed.derive("t")),
                                           gen_blobs(BlobSpec{3, 2, 2.0}, 4, seed.derive("v")),
                                           gen_blobs(BlobSpec{3, 2, 2.0}, 20, seed.derive("x")));
            const LossKind loss = f.regression ? LossKind::squared_error : LossKind::zero_one;
            const auto base = select_model(f.grid, split, loss, seed.derive("fit"));
            const auto aug = select_model(f.grid, presample(split, 0.0, seed.derive("leak")), loss,
                                          seed.derive("fit"));
            ++checked;
            if (base.chosen == aug.chosen && base.validation_losses == aug.validation_losses &&
                *base.test_losses == *aug.test_losses) {
                ++identical;
            } else if (failed.empty()) {
                failed = f.name;
            }
        }
    }
    return {identical == checked,
            fmt::format("{}/{} selections bit-identical across 5 learner families{}", identical,
                        checked, failed.empty() ? "" : "; first mismatch: " + failed)};
}

Outcome c4_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<oracle::Atom> atoms{{0.0, 0, 0.5}, {1.0, 1, 0.3}, {3.0, 0, 0.2}};
    std::vector<Example> support;
    std::vector<double> weights;
    for (const auto& a : atoms) {
        support.push_back({{a.x}, double(a.label)});
        weights.push_back(a.weight);
    }
    const Generator gen = discrete_generator(support, weights, TaskKind::classification, 2);
    EstimatorOptions o;
    o.trials = 100000;
    o.seed = Seed(404).derive("oaros");
    const auto oaros = estimate_oaros(KnnParams{1}, gen, 2, o);
    o.seed = Seed(404).derive("oavs");
    const auto oavs = estimate_oavs(KnnParams{1}, gen, 2, 2, o);
    const double exact_oaros = oracle::exact_oaros_1nn(atoms, 2);
    const double exact_oavs = oracle::exact_oavs_1nn(atoms, 2, 2);
    const double z1 = std::abs(oaros.mean - exact_oaros) / oaros.std_error;
    const double z2 = std::abs(oavs.mean - exact_oavs) / oavs.std_error;
    const double secs = seconds_since(t0);
    return {z1 <= kOracleSigmas && z2 <= kOracleSigmas && secs < kC4Seconds,
            fmt::format("OAROS {:.5f} vs exact {:.5f} ({:.2f} SE); OAVS {:.5f} vs exact {:.5f} "
                        "({:.2f} SE); limit {} SE; {:.2f}s (< {}s)",
                        oaros.mean, exact_oaros, z1, oavs.mean, exact_oavs, z2, kOracleSigmas,
                        secs, kC4Seconds)};
}

EstimatorOptions ridge_options(std::uint64_t seed) {
    EstimatorOptions o;
    o.trials = 2000;
    o.seed = Seed(seed);
    return o;
}

Outcome c5_generalization() {
    const auto check = check_generalization(PolyRegParams{3, 1.0}, cubic_generator(CubicSpec{}), 20,
                                            ridge_options(505));
    return {check.holds,
            fmt::format("gen gap {:.5f} <= OAROS {:.5f} + {}*{:.5f}", check.gap.mean,
                        check.oaros.mean, kOracleSigmas, check.combined_std_error)};
}

Outcome c6_theorem1() {
    const Generator gen = cubic_generator(CubicSpec{});
    const Learner ridge = PolyRegParams{3, 1.0};
    const auto at20 = check_validation_stability(ridge, gen, 20, 5, ridge_options(606));
    const auto at40 = check_validation_stability(ridge, gen, 40, 5, ridge_options(607));
    const bool decrease = at40.eps1.mean < at20.eps1.mean && at40.eps2.mean < at20.eps2.mean &&
                          at40.oavs.mean < at20.oavs.mean;
    return {at20.holds && decrease,
            fmt::format("OAVS {:.5f} <= bound {:.5f} + {}*{:.5f}; n 20->40: eps1 {:.5f}->{:.5f}, "
                        "eps2 {:.6f}->{:.6f}, OAVS {:.5f}->{:.5f}",
                        at20.oavs.mean, at20.bound, kOracleSigmas, at20.combined_std_error,
                        at20.eps1.mean, at40.eps1.mean, at20.eps2.mean, at40.eps2.mean,
                        at20.oavs.mean, at40.oavs.mean)};
}

Outcome c7_gap_ordering() {
    const ModelGrid grid{PolyRegParams{1}, PolyRegParams{2}, PolyRegParams{3}};
    std::size_t conditioned = 0, preserved = 0;
    for (std::size_t r = 0; r < 500; ++r) {
        const Seed seed = Seed(707).derive("rep", r);
        const Split split = make_split(gen_cubic(CubicSpec{}, 10, seed.derive("train")),
                                       gen_cubic(CubicSpec{}, 5, seed.derive("validation")));
        const auto base = select_model(grid, split, LossKind::squared_error, seed.derive("fit"));
        const std::size_t leaked = Stream(seed.derive("leak")).index(split.m());
        const auto aug = select_model(grid, leak_indices(split, {leaked}), LossKind::squared_error,
                                      seed.derive("fit"));
        double perturbation = 0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            perturbation = std::max(perturbation,
                                    std::abs(aug.validation_losses[k] - base.validation_losses[k]));
        }
        if (perturbation < min_selection_gap(base.validation_losses)) {
            ++conditioned;
            preserved += ordering_preserved(base.validation_losses, aug.validation_losses);
        }
    }
    const double rate = conditioned ? double(preserved) / double(conditioned) : 0.0;
    return {conditioned > 0 && rate >= kOrderingRate,
            fmt::format("{}/{} replications below the gap keep their ordering ({:.4f}, need >= {})",
                        preserved, conditioned, rate, kOrderingRate)};
}

Outcome c8_knee() {
    std::size_t cases = 0, ok = 0;
    // piecewise: rises linearly to a breakpoint then flat; every interior grid breakpoint
    for (std::size_t steps : {4, 10, 20, 50}) {
        std::vector<double> p(steps + 1);
        for (std::size_t i = 0; i <= steps; ++i) p[i] = double(i) / double(steps);
        for (std::size_t b = 1; b < steps; ++b) {
            std::vector<double> s(steps + 1);
            for (std::size_t i = 0; i <= steps; ++i) s[i] = std::min(p[i], p[b]);
            ++cases;
            const auto k = knee_detect(p, s);
            ok += k && *k == p[b];
        }
        std::vector<double> line(steps + 1), root(steps + 1);
        for (std::size_t i = 0; i <= steps; ++i) {
            line[i] = 0.5 - 3.0 * p[i];
            root[i] = std::sqrt(p[i]);
        }
        ++cases;
        ok += !knee_detect(p, line).has_value();
        ++cases;
        const auto k = knee_detect(p, root);
        ok += k && std::abs(*k - 0.25) <= kKneeGridSteps / double(steps) + 1e-12;
    }
    return {ok == cases, fmt::format("{}/{} constructed curves (piecewise breakpoints, sqrt, lines) "
                                     "give the expected knee",
                                     ok, cases)};
}

Outcome c9_bias() {
    auto biased = appendix_config({0.0, 1.0}, 1000, 909);
    biased.validation_bias = BiasSpec{default_regression_bias(CubicSpec{}), std::nullopt};
    biased.test_bias = biased.validation_bias;
    const auto unbiased = appendix_config({0.0, 1.0}, 1000, 909);
    const SweepResult rb = run_sweep(cli::make_sweep_spec(biased));
    const SweepResult ru = run_sweep(cli::make_sweep_spec(unbiased));
    const auto gain_b = minus(chosen_losses(rb, 0, true), chosen_losses(rb, 1, true));
    const auto gain_u = minus(chosen_losses(ru, 0, true), chosen_losses(ru, 1, true));
    const auto b = mean_and_error(gain_b);
    const auto u = mean_and_error(gain_u);
    const auto diff = mean_and_error(minus(gain_b, gain_u));
    const bool pass = b.mean > kSigmaMargin * b.std_error && diff.mean > kSigmaMargin * diff.std_error;
    return {pass, fmt::format("test MSE gain p=0->1: biased {:.4f} (SE {:.4f}), unbiased {:.4f} "
                              "(SE {:.4f}); biased - unbiased {:.4f} vs {}*SE {:.4f}",
                              b.mean, b.std_error, u.mean, u.std_error, diff.mean, kSigmaMargin,
                              kSigmaMargin * diff.std_error)};
}

Outcome c10_determinism() {
    auto config = appendix_config({0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}, 1000, 1010);
    config.workers = 1;
    const std::string serial = cli::to_csv(cli::run_config(config));
    config.workers = 8;
    const std::string parallel = cli::to_csv(cli::run_config(config));
    return {serial == parallel,
            fmt::format("serial vs 8 workers: {} bytes vs {} bytes, {}", serial.size(),
                        parallel.size(), serial == parallel ? "identical" : "DIFFERENT")};
}

Outcome c11_idx() {
    using Bytes = std::vector<std::uint8_t>;
    std::size_t checks = 0, ok = 0;
    auto expect = [&](bool b) {
        ++checks;
        ok += b;
    };
    auto rejects = [&](const std::function<void()>& f) {
        try {
            f();
            return false;
        } catch (const FormatError&) {
            return true;
        }
    };
    const Bytes images{0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2, 0, 64, 128, 255, 1, 2, 3, 4};
    const Bytes labels{0, 0, 8, 1, 0, 0, 0, 2, 7, 0};
    const Dataset d = idx_to_dataset(parse_idx_images(images), parse_idx_labels(labels));
    expect(d.size() == 2 && d.dim() == 4 && d.label(0) == 7 && d.row(0)[3] == 1.0);
    const Bytes be{0x00, 0x00, 0x27, 0x10};
    expect(read_be32(be, 0) == 10000);
    expect(encode_idx_images(parse_idx_images(images)) == images);
    expect(encode_idx_labels(parse_idx_labels(labels)) == labels);
    expect(encode_idx_images(dataset_to_idx_images(d, 2, 2)) == images);
    for (std::size_t cut = 0; cut < images.size(); ++cut) {
        expect(rejects([&] { parse_idx_images(Bytes(images.begin(), images.begin() + cut)); }));
    }
    for (std::size_t cut = 0; cut < labels.size(); ++cut) {
        expect(rejects([&] { parse_idx_labels(Bytes(labels.begin(), labels.begin() + cut)); }));
    }
    for (std::size_t byte = 0; byte < 4; ++byte) {
        for (int v = 0; v < 256; ++v) {
            Bytes img = images, lbl = labels;
            img[byte] = std::uint8_t(v);
            lbl[byte] = std::uint8_t(v);
            if (img != images) expect(rejects([&] { parse_idx_images(img); }));
            if (lbl != labels) expect(rejects([&] { parse_idx_labels(lbl); }));
        }
    }
    Bytes magic = images;
    magic[0] = 0x12, magic[1] = 0x34, magic[2] = 0x56, magic[3] = 0x78;
    expect(rejects([&] { parse_idx_images(magic); }));
    oracle::for_all(200, 1111, [&](oracle::Cases& cases, std::size_t) {
        IdxImages img;
        img.count = std::uint32_t(cases.integer(1, 5));
        img.rows = std::uint32_t(cases.integer(1, 6));
        img.cols = std::uint32_t(cases.integer(1, 6));
        img.pixels.resize(std::size_t(img.count) * img.rows * img.cols);
        for (auto& p : img.pixels) p = std::uint8_t(cases.integer(0, 255));
        Bytes lbl(img.count);
        for (auto& l : lbl) l = std::uint8_t(cases.integer(0, 9));
        const Dataset back = idx_to_dataset(parse_idx_images(encode_idx_images(img)),
                                            parse_idx_labels(encode_idx_labels(lbl)));
        expect(dataset_to_idx_images(back, img.rows, img.cols).pixels == img.pixels &&
               dataset_to_idx_labels(back) == lbl);
    });
    return {ok == checks, fmt::format("{}/{} IDX checks (shapes, byte order, every truncation, "
                                      "every corrupted magic byte, 200 round trips)",
                                      ok, checks)};
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"C1", "appendix regression reproduction", c1_appendix},
        {"C2", "sampler distributions", c2_samplers},
        {"C3", "p=0 exactness", c3_p_zero},
        {"C4", "stability oracle equivalence", c4_oracle},
        {"C5", "generalization theorem check", c5_generalization},
        {"C6", "validation stability bound", c6_theorem1},
        {"C7", "gap/ordering link", c7_gap_ordering},
        {"C8", "knee detection", c8_knee},
        {"C9", "bias experiment", c9_bias},
        {"C10", "determinism", c10_determinism},
        {"C11", "IDX round trip", c11_idx},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += !o.pass;
        fmt::print("[{}] {} {}: {}\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail);
        std::fflush(stdout);
    }
    fmt::print("{} of {} criteria passed\n", std::size(criteria) - failures, std::size(criteria));
    return failures == 0 ? 0 : 1;
}
