#pragma once

#include <cstdint>
#include <initializer_list>

namespace lapreg {

/// Deterministic random stream: xoshiro256++ seeded through the splitmix64
/// finalizer. Substreams are derived by absorbing a path of 64-bit ids into
/// the master seed, so replicate k of sample size n always sees the same
/// draws no matter how work is scheduled across threads.
class Rng {
  public:
    explicit Rng(uint64_t seed);

    /// Stream for (master, id_0, id_1, ...). Absorbing ids one by one keeps
    /// the derivation order-sensitive: (a, b) and (b, a) differ.
    static Rng substream(uint64_t master, std::initializer_list<uint64_t> path);

    uint64_t next();

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform();

    /// Uniform on (0, 1); a draw of exactly zero is redrawn.
    double uniform_open();

    double uniform(double lo, double hi);

    bool bernoulli(double p);

    /// Standard normal via the polar method; the spare deviate is cached.
    double normal();

    /// Gamma(shape, 1) by Marsaglia-Tsang, with the shape<1 boost.
    double gamma(double shape);

    /// Beta(a, b). Uses Johnk's ratio method when both shapes are <= 1
    /// (the only regime the generators here need), the gamma ratio
    /// otherwise. Degenerate shapes (a or b == 0) return the point-mass
    /// limit.
    double beta(double a, double b);

    /// Uniform integer in [0, n), rejection-sampled, n >= 1.
    uint64_t below(uint64_t n);

  private:
    uint64_t state_[4];
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

/// splitmix64 finalizer; also used standalone to hash ids.
uint64_t mix64(uint64_t value);

/// Seed of the substream (master, id_0, id_1, ...); Rng::substream is
/// Rng(derive_stream_seed(...)).
uint64_t derive_stream_seed(uint64_t master, std::initializer_list<uint64_t> path);

}  // namespace lapreg
