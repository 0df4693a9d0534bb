#include "transval/core/random.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "transval/core/error.hpp"

namespace transval {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

void philox_round(std::uint32_t ctr[4], const std::uint32_t key[2]) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMulA) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMulB) * ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    ctr[0] = hi1 ^ ctr[1] ^ key[0];
    ctr[1] = lo1;
    ctr[2] = hi0 ^ ctr[3] ^ key[1];
    ctr[3] = lo0;
}

}  // namespace

Seed Seed::derive(std::string_view tag, std::uint64_t index) const {
    Seed child = *this;
    child.path_.emplace_back(std::string(tag), index);
    return child;
}

std::uint64_t Seed::key() const noexcept {
    std::uint64_t h = splitmix64(master_);
    for (const auto& [tag, index] : path_) {
        h = splitmix64(h ^ fnv1a(tag));
        h = splitmix64(h ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

std::string Seed::to_string() const {
    std::string out = std::to_string(master_);
    for (const auto& [tag, index] : path_) {
        out += '/';
        out += tag;
        out += ':';
        out += std::to_string(index);
    }
    return out;
}

Seed Seed::parse(std::string_view text) {
    auto parse_u64 = [&](std::string_view s) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw FormatError("bad seed path: '" + std::string(text) + "'");
        }
        return v;
    };
    std::size_t slash = text.find('/');
    Seed seed(parse_u64(text.substr(0, slash)));
    while (slash != std::string_view::npos) {
        std::size_t next = text.find('/', slash + 1);
        std::string_view step = text.substr(slash + 1, next == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : next - slash - 1);
        std::size_t colon = step.rfind(':');
        if (colon == std::string_view::npos || colon == 0) {
            throw FormatError("bad seed path step: '" + std::string(step) + "'");
        }
        seed = seed.derive(step.substr(0, colon), parse_u64(step.substr(colon + 1)));
        slash = next;
    }
    return seed;
}

Stream::Stream(std::uint64_t key) {
    key_[0] = static_cast<std::uint32_t>(key);
    key_[1] = static_cast<std::uint32_t>(key >> 32);
}

void Stream::refill() {
    std::uint32_t ctr[4] = {static_cast<std::uint32_t>(block_),
                            static_cast<std::uint32_t>(block_ >> 32), 0, 0};
    std::uint32_t key[2] = {key_[0], key_[1]};
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeylA;
            key[1] += kWeylB;
        }
        philox_round(ctr, key);
    }
    ++block_;
    buffer_[0] = (static_cast<std::uint64_t>(ctr[1]) << 32) | ctr[0];
    buffer_[1] = (static_cast<std::uint64_t>(ctr[3]) << 32) | ctr[2];
    available_ = 2;
}

std::uint64_t Stream::next_u64() {
    if (available_ == 0) refill();
    return buffer_[2 - available_--];
}

double Stream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double Stream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    // 1 - uniform() lies in (0, 1], so the log is finite.
    const double radius = std::sqrt(-2.0 * std::log(1.0 - uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t Stream::index(std::uint64_t n) {
    if (n == 0) throw ContractError("Stream::index: empty range");
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % n;
}

}  // namespace transval
