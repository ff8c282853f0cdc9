#ifndef MLAB_RNG_HPP
#define MLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace mlab {

// SplitMix64 mixing step; used to derive independent substream seeds from a
// master seed so that batch/replicate streams do not depend on thread layout.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(master ^ mix64(a + 1)) ^ mix64(b + 0x9E3779B97F4A7C15ULL));
}

// mt19937_64 with hand-rolled variate transforms. std:: distributions are
// implementation-defined, which would silently break bit-reproducibility.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // uniform double in [0, 1) with 53 random bits
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // standard normal via Box-Muller; no cached spare, so the stream position
    // is a pure function of the number of calls made
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    // uniform on the unit sphere S^{dim-1} in R^dim
    std::vector<double> unit_vector(int dim) {
        std::vector<double> v(dim);
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int i = 0; i < dim; ++i) {
                v[i] = gaussian();
                norm2 += v[i] * v[i];
            }
        } while (norm2 < 1e-300);
        double inv = 1.0 / std::sqrt(norm2);
        for (double& x : v) x *= inv;
        return v;
    }

    // uniform in the closed ball of given radius in R^dim
    std::vector<double> in_ball(int dim, double radius) {
        std::vector<double> v = unit_vector(dim);
        double r = radius * std::pow(uniform(), 1.0 / dim);
        for (double& x : v) x *= r;
        return v;
    }

    std::uint64_t raw() { return gen_(); }

  private:
    std::mt19937_64 gen_;
};

}  // namespace mlab

#endif
