#pragma once

// Deterministic Gaussian sampling. std::normal_distribution's stream is
// implementation-defined, so reproducible output (fixed seed -> identical
// bytes on any platform) needs a hand-rolled transform over mt19937_64.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "revdis/types.hpp"

namespace revdis {

class GaussianSampler {
  public:
    explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}

    // standard normal via Box-Muller (one fresh pair of uniforms per draw)
    double operator()() {
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    // complex normal with unit variance (Re and Im each N(0, 1/2))
    Complex complex_normal() {
        const double re = (*this)();
        const double im = (*this)();
        return Complex(re, im) / std::sqrt(2.0);
    }

  private:
    double uniform01() {
        // top 53 bits -> [0, 1)
        return double(rng_() >> 11) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
};

}  // namespace revdis
