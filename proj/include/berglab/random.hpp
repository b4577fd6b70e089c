#ifndef BERGLAB_RANDOM_HPP
#define BERGLAB_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "berglab/geom.hpp"
#include "berglab/invariant_function.hpp"

namespace berglab {

// Deterministic uniform in [-1,1) straight from the generator words, so the
// stream does not depend on the standard library's distribution internals.
inline double symmetric_uniform(std::mt19937_64& rng) {
    return 2.0 * ((rng() >> 11) * 0x1.0p-53) - 1.0;
}

// Seeded random admissible potential: coefficients on P_2..P_max with a 1/k^2
// envelope, rescaled until the Kahler condition holds with margin.  The same
// seed always produces the same potential.
inline InvariantFunction random_potential(std::uint64_t seed, int max_degree = 6,
                                          double amplitude = 0.3) {
    std::mt19937_64 rng(seed);
    std::vector<double> coeffs(static_cast<std::size_t>(max_degree) + 1, 0.0);
    for (int k = 2; k <= max_degree; ++k)
        coeffs[k] = amplitude * symmetric_uniform(rng) / (k * k);
    InvariantFunction f{std::move(coeffs)};
    for (int attempt = 0; attempt < 60; ++attempt) {
        const InvariantFunction lap = laplace_fs(f);
        double min_val = 1.0 + lap(0.0);
        min_val = std::min(min_val, 1.0 + lap(1.0));
        for (int j = 0; j <= 200; ++j)
            min_val = std::min(min_val, 1.0 + lap(j / 200.0));
        if (min_val > 0.25) return f;
        f *= 0.5;
    }
    return InvariantFunction(); // unreachable at these amplitudes
}

} // namespace berglab

#endif
