#ifndef MOPROX_RNG_HPP
#define MOPROX_RNG_HPP

#include <cstdint>

#include "moprox/core.hpp"

namespace moprox {

/// splitmix64 step, used to derive independent substream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** generator with explicit double mapping; identical output on
/// every platform, so seeded runs reproduce bit-for-bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        for (int i = 0; i < 4; ++i) s_[i] = mix_seed(seed, static_cast<std::uint64_t>(i) + 17);
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
        std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// log-uniform magnitude in [a, b], 0 < a < b
    double log_uniform(double a, double b) {
        return a * std::exp(uniform() * std::log(b / a));
    }

    double sign() { return (next() & 1) ? 1.0 : -1.0; }

    /// standard normal via Box-Muller on the deterministic uniform stream
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    Vec unit_vector(int n) {
        Vec v(n);
        double nrm = 0.0;
        do {
            for (int i = 0; i < n; ++i) v[i] = normal();
            nrm = norm2(v);
        } while (nrm < 1e-12);
        for (int i = 0; i < n; ++i) v[i] /= nrm;
        return v;
    }

    /// unit vector within chordal distance <= rho of the unit vector u
    Vec unit_vector_near(const Vec& u, double rho) {
        int n = static_cast<int>(u.size());
        if (n == 1) return u;  // the only nearby unit vector is u itself
        Vec v(n);
        for (int trial = 0; trial < 64; ++trial) {
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) {
                v[i] = u[i] + rho * uniform(-1.0, 1.0);
                nrm += v[i] * v[i];
            }
            nrm = std::sqrt(nrm);
            if (nrm < 1e-12) continue;
            for (int i = 0; i < n; ++i) v[i] /= nrm;
            Vec d = v - u;
            if (norm2(d) <= rho) return v;
        }
        return u;
    }

private:
    std::uint64_t s_[4];
};

}  // namespace moprox

#endif
