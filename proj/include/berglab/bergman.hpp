#ifndef BERGLAB_BERGMAN_HPP
#define BERGLAB_BERGMAN_HPP

#include <cmath>
#include <span>
#include <vector>

#include "berglab/errors.hpp"
#include "berglab/geom.hpp"
#include "berglab/rational.hpp"

namespace berglab {

// Holomorphic sections of the m-th power of the hyperplane bundle and the
// Bergman density they generate.  The monomials z^i, i = 0..m, are the weight
// basis of the circle action; invariance makes their Gram matrix diagonal, so
// orthonormalization is a per-index rescale.  In the moment coordinate the
// pointwise reference norm of z^i is x^i (1-x)^{m-i}.

namespace detail {

// Fills u_i = x^i (1-x)^{m-i} for i = 0..m.  Evaluated through logs so edge
// nodes of large-m runs neither underflow through intermediates nor overflow;
// a term whose true value is below the smallest double simply flushes to zero.
inline void monomial_norms(int m, double x, std::span<double> out) {
    if (x <= 0.0) {
        for (int i = 0; i <= m; ++i) out[i] = 0.0;
        out[0] = 1.0;
        return;
    }
    if (x >= 1.0) {
        for (int i = 0; i <= m; ++i) out[i] = 0.0;
        out[m] = 1.0;
        return;
    }
    const double lx = std::log(x);
    const double l1x = std::log1p(-x);
    for (int i = 0; i <= m; ++i) out[i] = std::exp(i * lx + (m - i) * l1x);
}

} // namespace detail

// Diagonal Gram data of the monomial sections under the L^2 inner product of
// an invariant metric.
struct SectionGram {
    int power = 0;
    std::vector<double> diag;       // squared norms G_0..G_m
    bool underresolved = false;     // m exceeded the grid's design maximum
};

//   G_i = int_0^1 x^i (1-x)^{m-i} exp(-m phi) (1 + lap phi) dx.
inline SectionGram gram(int m, const InvariantMetric& g) {
    if (m < 1) throw precondition_error("gram: power must be >= 1");
    SectionGram result;
    result.power = m;
    result.underresolved = !g.grid().resolves_power(m);
    result.diag.assign(m + 1, 0.0);
    const auto& nodes = g.grid().nodes();
    const auto& weights = g.grid().weights();
    const auto& gf = g.density_factor();
    std::vector<double> u(m + 1);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        detail::monomial_norms(m, nodes[j], u);
        const double f = weights[j] * std::exp(-m * g.potential()(nodes[j])) * gf[j];
        for (int i = 0; i <= m; ++i) result.diag[i] += f * u[i];
    }
    return result;
}

// Topological constant the density must equal on average: (m+1)/m here.
inline Rational c_q(int m) {
    if (m < 1) throw precondition_error("c_q: power must be >= 1");
    return Rational(m + 1, m);
}

// Bergman density at the grid nodes:
//   K(q,h) = (1/m) sum_i x^i (1-x)^{m-i} exp(-m phi) / G_i,   q = 1/m.
struct DensityProfile {
    int power = 0;
    std::vector<double> values;
};

inline DensityProfile density(const SectionGram& gram_data, const InvariantMetric& g) {
    const int m = gram_data.power;
    DensityProfile profile;
    profile.power = m;
    profile.values.assign(g.grid().node_count(), 0.0);
    const auto& nodes = g.grid().nodes();
    std::vector<double> u(m + 1);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        detail::monomial_norms(m, nodes[j], u);
        const double f = std::exp(-m * g.potential()(nodes[j])) / m;
        double acc = 0.0;
        for (int i = 0; i <= m; ++i) acc += u[i] / gram_data.diag[i];
        profile.values[j] = f * acc;
    }
    return profile;
}

inline DensityProfile density(int m, const InvariantMetric& g) {
    return density(gram(m, g), g);
}

// Pullback of the ambient Fubini-Study metric under the embedding by an
// orthonormal section basis:
//   phi_m = (1/m) log( sum_i x^i (1-x)^{m-i} / G_i ),  normalized to mean zero
// (the overall scale of a metric is immaterial to its curvature form).
inline InvariantMetric fs_pullback(int m, const InvariantMetric& g) {
    const SectionGram gr = gram(m, g);
    const auto& nodes = g.grid().nodes();
    std::vector<double> phi_m(nodes.size());
    std::vector<double> u(m + 1);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        detail::monomial_norms(m, nodes[j], u);
        double acc = 0.0;
        for (int i = 0; i <= m; ++i) acc += u[i] / gr.diag[i];
        phi_m[j] = std::log(acc) / m;
    }
    InvariantFunction potential =
        InvariantFunction::from_samples(g.grid(), phi_m, g.degree_cap());
    potential.set_coefficient(0, 0.0);
    return InvariantMetric(std::move(potential), g.grid(), g.degree_cap());
}

} // namespace berglab

#endif
