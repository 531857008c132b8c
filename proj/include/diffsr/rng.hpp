#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace diffsr {

/// Deterministic RNG with Box-Muller normals. The draw sequence depends only
/// on (seed, stream), not on platform or standard-library internals, so
/// fixed-seed runs are bit-reproducible.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Standard normal draw (Box-Muller, one value per pair of uniforms).
    double normal();
    /// Fill with i.i.d. standard normals.
    void fill_normal(std::span<double> out);
    std::vector<double> normal_vector(std::size_t n);

    std::uint64_t next_u64();

private:
    std::mt19937_64 gen_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// splitmix64 step; used to derive well-separated stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace diffsr
