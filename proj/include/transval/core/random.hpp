#pragma once

// Counter-based randomness shared by every module.
//
// A Seed is a master value plus a derivation path of (tag, index) pairs.
// Every random quantity in the library is drawn from a Stream keyed by such
// a seed, so any unit of work (a trial, a sweep cell) can be replayed alone
// and in any order.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace transval {

class Seed {
public:
    using Step = std::pair<std::string, std::uint64_t>;

    Seed() = default;
    explicit Seed(std::uint64_t master) : master_(master) {}

    /// Child seed with one more path step; the parent is unchanged.
    Seed derive(std::string_view tag, std::uint64_t index = 0) const;

    std::uint64_t master() const noexcept { return master_; }
    const std::vector<Step>& path() const noexcept { return path_; }

    /// 64-bit key mixing the master value and the whole path.
    std::uint64_t key() const noexcept;

    /// "master/tag:index/tag:index"; parse() is its inverse.
    std::string to_string() const;
    static Seed parse(std::string_view text);

    friend bool operator==(const Seed&, const Seed&) = default;

private:
    std::uint64_t master_ = 0;
    std::vector<Step> path_;
};

/// Philox4x32-10 keyed by a Seed. Block i of the stream is a pure function
/// of (key, i), so streams never share state.
class Stream {
public:
    using result_type = std::uint64_t;

    explicit Stream(const Seed& seed) : Stream(seed.key()) {}
    explicit Stream(std::uint64_t key);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller; the spare variate is cached.
    double normal();
    double normal(double mean, double sigma) { return mean + sigma * normal(); }

    /// uniform() < p, so p == 0 is never and p == 1 is always true.
    bool bernoulli(double p) { return uniform() < p; }

    /// Unbiased integer in [0, n); n must be positive.
    std::uint64_t index(std::uint64_t n);

    template <class T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(index(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    void refill();

    std::uint32_t key_[2];
    std::uint64_t block_ = 0;
    std::uint64_t buffer_[2] = {0, 0};
    int available_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace transval
