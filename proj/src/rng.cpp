#include "diffsr/rng.hpp"

#include <cmath>

namespace diffsr {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}
}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed;
    std::uint64_t a = splitmix64(state);
    state ^= 0x6a09e667f3bcc909ull + stream;
    std::uint64_t b = splitmix64(state);
    return a ^ (b + 0x9e3779b97f4a7c15ull * (stream + 1));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : gen_(mix_seed(seed, stream)) {}

std::uint64_t Rng::next_u64() { return gen_(); }

double Rng::uniform() {
    // 53-bit mantissa from the top bits; in [0, 1)
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(kTwoPi * u2);
    has_cached_ = true;
    return r * std::cos(kTwoPi * u2);
}

void Rng::fill_normal(std::span<double> out) {
    for (double& v : out) v = normal();
}

std::vector<double> Rng::normal_vector(std::size_t n) {
    std::vector<double> v(n);
    fill_normal(v);
    return v;
}

}  // namespace diffsr
