#pragma once

#include <cstdint>
#include <random>

namespace nrfdr {

/// Derives an independent stream seed from a base seed (splitmix64 step).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Deterministic RNG. Normal/gamma/beta variates are generated with
/// explicit algorithms (Box-Muller, Marsaglia-Tsang) on top of the raw
/// engine so that streams do not depend on the standard library's
/// distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0,1).
    double uniform();
    /// Uniform on (0,1], never exactly zero.
    double uniform_pos();
    /// Standard normal.
    double normal();
    /// Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang).
    double gamma(double shape);
    /// Beta(a, b) for a, b >= 1.
    double beta(double a, double b);
    /// Bernoulli with success probability p.
    bool bernoulli(double p) { return uniform() < p; }

    std::uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
    bool has_cached_normal_ = false;
    double cached_normal_ = 0.0;
};

}  // namespace nrfdr
