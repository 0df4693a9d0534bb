#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "oracles.hpp"

#include "transval/core/error.hpp"
#include "transval/core/split.hpp"
#include "transval/samplers.hpp"

using namespace transval;

namespace {

Split toy_split(std::size_t n, std::size_t m) {
    std::vector<double> tx(n), ty(n), vx(m), vy(m);
    for (std::size_t i = 0; i < n; ++i) tx[i] = ty[i] = double(i);
    for (std::size_t i = 0; i < m; ++i) vx[i] = vy[i] = 100.0 + double(i);
    return make_split(Dataset(TaskKind::regression, 1, tx, ty),
                      Dataset(TaskKind::regression, 1, vx, vy));
}

}  // namespace

TEST_CASE("presample at p=0 and p=1") {
    const Split s = toy_split(10, 5);
    const AugmentedSplit none = presample(s, 0.0, Seed(1));
    CHECK(none.leaked.empty());
    CHECK(none.effective_train == s.train);
    const AugmentedSplit all = presample(s, 1.0, Seed(1));
    CHECK(all.leaked == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(all.effective_train == s.train.concat(s.validation));
    CHECK(all.base.validation == s.validation);
    CHECK_THROWS_AS(presample(s, -0.1, Seed(1)), ContractError);
    CHECK_THROWS_AS(presample(s, 1.1, Seed(1)), ContractError);
    CHECK_THROWS_AS(presample(s, NAN, Seed(1)), ContractError);
}

TEST_CASE("presample invariants") {
    oracle::for_all(300, 5, [](oracle::Cases& cases, std::size_t) {
        const std::size_t n = cases.integer(1, 12), m = cases.integer(1, 12);
        const Split s = toy_split(n, m);
        const double p = cases.real(0, 1);
        const AugmentedSplit a = presample(s, p, Seed(cases.seed()));
        CHECK(std::is_sorted(a.leaked.begin(), a.leaked.end()));
        CHECK(std::adjacent_find(a.leaked.begin(), a.leaked.end()) == a.leaked.end());
        for (auto i : a.leaked) CHECK(i < m);
        CHECK(a.effective_train.size() == n + a.leaked.size());
        CHECK(a.base.validation == s.validation);
        for (std::size_t k = 0; k < a.leaked.size(); ++k) {
            CHECK(a.effective_train.row(n + k)[0] == s.validation.row(a.leaked[k])[0]);
        }
    });
}

TEST_CASE("leak_indices copies the requested rows") {
    const Split s = toy_split(3, 4);
    const AugmentedSplit a = leak_indices(s, {3, 1});
    CHECK(a.leaked == std::vector<std::size_t>{1, 3});
    CHECK(a.effective_train.size() == 5);
    CHECK(a.effective_train.row(3)[0] == 101.0);
    CHECK_THROWS_AS(leak_indices(s, {4}), ContractError);
    CHECK_THROWS_AS(leak_indices(s, {1, 1}), ContractError);
}

TEST_CASE("expected effective size is n + p m") {
    const Split s = toy_split(7, 9);
    const double p = 0.35;
    const int seeds = 10000;
    double sum = 0, sq = 0;
    for (int i = 0; i < seeds; ++i) {
        const double size = double(presample(s, p, Seed(3).derive("s", i)).effective_train.size());
        sum += size;
        sq += size * size;
    }
    const double mean = sum / seeds;
    const double se = std::sqrt((sq / seeds - mean * mean) / seeds);
    CHECK(std::abs(mean - (7 + p * 9)) < 3 * se);
}

TEST_CASE("pairwise leak indicators are uncorrelated") {
    const Split s = toy_split(2, 4);
    const int seeds = 100000;
    std::vector<std::vector<double>> hits(seeds, std::vector<double>(4, 0.0));
    for (int i = 0; i < seeds; ++i) {
        for (auto k : presample(s, 0.5, Seed(12).derive("s", i)).leaked) hits[i][k] = 1.0;
    }
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) {
            double sa = 0, sb = 0, sab = 0;
            for (const auto& h : hits) {
                sa += h[a];
                sb += h[b];
                sab += h[a] * h[b];
            }
            const double cov = sab / seeds - (sa / seeds) * (sb / seeds);
            CHECK(std::abs(cov) < 0.01);
        }
    }
}

TEST_CASE("batch schedule extremes and sizing") {
    const Split s = toy_split(10, 6);
    const auto t = batch_schedule(s, 0.0, 3, 50, Seed(1));
    CHECK(t.batches.size() == 50);
    CHECK(t.validation_batches() == 0);
    const auto v = batch_schedule(s, 1.0, 3, 50, Seed(1));
    CHECK(v.validation_batches() == 50);
    CHECK(batch_schedule(s, 0.5, 3, 0, Seed(1)).batches.empty());
    CHECK_THROWS_AS(batch_schedule(s, 0.5, 7, 10, Seed(1)), SizingError);
    CHECK_THROWS_AS(batch_schedule(s, 0.5, 0, 10, Seed(1)), SizingError);
    CHECK_THROWS_AS(batch_schedule(s, 1.5, 3, 10, Seed(1)), ContractError);
}

TEST_CASE("batches are single-source and epochs never repeat an example") {
    oracle::for_all(100, 17, [](oracle::Cases& cases, std::size_t) {
        const std::size_t n = cases.integer(1, 15), m = cases.integer(1, 15);
        const std::size_t bs = cases.integer(1, std::min(n, m));
        const auto sched = batch_schedule(toy_split(n, m), cases.real(0, 1), bs,
                                          cases.integer(0, 80), Seed(cases.seed()));
        std::set<std::size_t> epoch[2];
        const std::size_t sizes[2] = {n, m};
        for (std::size_t it = 0; it < sched.batches.size(); ++it) {
            const Batch& b = sched.batches[it];
            CHECK(b.iteration == it);
            CHECK(b.indices.size() == bs);
            const int src = b.source == BatchSource::validation ? 1 : 0;
            // A fresh epoch starts when the remaining pool cannot fill a batch.
            if (epoch[src].size() + bs > sizes[src]) epoch[src].clear();
            for (auto i : b.indices) {
                CHECK(i < sizes[src]);
                CHECK(epoch[src].insert(i).second);
            }
        }
    });
}

TEST_CASE("batch schedule is deterministic in the seed") {
    const Split s = toy_split(9, 9);
    const auto a = batch_schedule(s, 0.4, 2, 100, Seed(5).derive("x"));
    const auto b = batch_schedule(s, 0.4, 2, 100, Seed(5).derive("x"));
    REQUIRE(a.batches.size() == b.batches.size());
    for (std::size_t i = 0; i < a.batches.size(); ++i) {
        CHECK(a.batches[i].source == b.batches[i].source);
        CHECK(a.batches[i].indices == b.batches[i].indices);
    }
}

TEST_CASE("batch source choices pass a runs test at p=0.5") {
    const auto sched = batch_schedule(100, 100, 0.5, 1, 20000, Seed(99));
    double n1 = 0, n2 = 0, runs = 1;
    for (std::size_t i = 0; i < sched.batches.size(); ++i) {
        (sched.batches[i].source == BatchSource::validation ? n1 : n2) += 1;
        if (i > 0 && sched.batches[i].source != sched.batches[i - 1].source) runs += 1;
    }
    const double n = n1 + n2;
    const double mu = 2 * n1 * n2 / n + 1;
    const double var = 2 * n1 * n2 * (2 * n1 * n2 - n) / (n * n * (n - 1));
    CHECK(std::abs((runs - mu) / std::sqrt(var)) < 2.576);
}

TEST_CASE("distinct validation examples are counted once") {
    const auto sched = batch_schedule(4, 4, 1.0, 2, 6, Seed(2));
    CHECK(sched.distinct_validation_examples() == 4);
    CHECK(batch_schedule(4, 4, 0.0, 2, 6, Seed(2)).distinct_validation_examples() == 0);
}

TEST_CASE("equivalent presample probability") {
    const auto a = equivalent_presample_p(0.05, 40000, 15000);
    CHECK(a.value == doctest::Approx(0.133333333333).epsilon(1e-10));
    CHECK_FALSE(a.clamped);
    CHECK(equivalent_presample_p(0.0, 7, 3).value == 0.0);
    const auto c = equivalent_presample_p(0.9, 10, 5);
    CHECK(c.raw == doctest::Approx(1.8));
    CHECK(c.value == 1.0);
    CHECK(c.clamped);
    CHECK_THROWS_AS(equivalent_presample_p(0.1, 0, 5), ContractError);
}
