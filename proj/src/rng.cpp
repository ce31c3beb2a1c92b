#include "lapreg/rng.hpp"

#include <cmath>

#include "lapreg/errors.hpp"

namespace lapreg {

uint64_t mix64(uint64_t value) {
    value += 0x9e3779b97f4a7c15ULL;
    value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
    value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
    return value ^ (value >> 31);
}

namespace {

inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(uint64_t seed) {
    // Expand the seed through four splitmix64 steps; the all-zero state is
    // unreachable this way.
    uint64_t s = seed;
    for (auto& word : state_) {
        s = mix64(s);
        word = s;
    }
}

uint64_t derive_stream_seed(uint64_t master, std::initializer_list<uint64_t> path) {
    uint64_t h = mix64(master);
    for (uint64_t id : path) h = mix64(h ^ mix64(id));
    return h;
}

Rng Rng::substream(uint64_t master, std::initializer_list<uint64_t> path) {
    return Rng(derive_stream_seed(master, path));
}

uint64_t Rng::next() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform_open() {
    double u;
    do {
        u = uniform();
    } while (u == 0.0);
    return u;
}

double Rng::uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

bool Rng::bernoulli(double p) { return uniform() < p; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * scale;
    has_spare_ = true;
    return u * scale;
}

double Rng::gamma(double shape) {
    if (shape <= 0.0) return 0.0;
    if (shape < 1.0) {
        const double boost = std::pow(uniform_open(), 1.0 / shape);
        return gamma(shape + 1.0) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

double Rng::beta(double a, double b) {
    if (a < 0.0 || b < 0.0) fail(ErrorCode::BadInput, "beta shapes must be nonnegative");
    if (a == 0.0 && b == 0.0) return bernoulli(0.5) ? 1.0 : 0.0;
    if (a == 0.0) return 0.0;
    if (b == 0.0) return 1.0;
    if (a <= 1.0 && b <= 1.0) {
        // Johnk's method; acceptance is bounded away from zero for shapes
        // in (0, 1].
        for (;;) {
            const double x = std::pow(uniform_open(), 1.0 / a);
            const double y = std::pow(uniform_open(), 1.0 / b);
            const double sum = x + y;
            if (sum <= 1.0) {
                if (sum == 0.0) return a / (a + b);  // both underflowed
                return x / sum;
            }
        }
    }
    const double ga = gamma(a);
    const double gb = gamma(b);
    if (ga + gb == 0.0) return a / (a + b);
    return ga / (ga + gb);
}

uint64_t Rng::below(uint64_t n) {
    if (n == 0) fail(ErrorCode::BadInput, "below(0)");
    const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
    uint64_t draw;
    do {
        draw = next();
    } while (draw >= limit);
    return draw % n;
}

}  // namespace lapreg
