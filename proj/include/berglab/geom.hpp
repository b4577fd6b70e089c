#ifndef BERGLAB_GEOM_HPP
#define BERGLAB_GEOM_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "berglab/errors.hpp"
#include "berglab/invariant_function.hpp"
#include "berglab/moment_grid.hpp"

namespace berglab {

// Circle-invariant Kahler geometry on the sphere in the moment coordinate
// x = |z|^2 / (1 + |z|^2).  The reference metric is Fubini-Study with unit
// area; relative to it a metric is encoded by its potential phi, and the area
// density picks up the conformal factor 1 + lap(phi).
//
// Conventions, pinned once and validated by the test suite:
//   lap P_k = -k(k+1) P_k            (nonpositive spectrum, lap = d/dx(x(1-x) d/dx))
//   sigma(FS) = 2, mean of sigma = 2 (twice the Chern number of the sphere)
//   lich = lap^2 + 2 lap at FS       (eigenvalues (k-1)k(k+1)(k+2))

inline constexpr int kDefaultDegreeCap = 64;

// Invariant Laplacian of the reference metric, diagonal on the Legendre basis.
inline InvariantFunction laplace_fs(const InvariantFunction& f) {
    std::vector<double> c(f.coefficients());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= -static_cast<double>(k) * (k + 1.0);
    return InvariantFunction(std::move(c));
}

inline double lichnerowicz_eigenvalue(int k) {
    return static_cast<double>(k - 1) * k * (k + 1) * (k + 2);
}

// Fourth-order Lichnerowicz operator at the reference metric.  Its kernel on
// mean-zero invariant functions is spanned by P_1, the holomorphy potential of
// the rotation field.
inline InvariantFunction lichnerowicz_fs(const InvariantFunction& f) {
    std::vector<double> c(f.coefficients());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= lichnerowicz_eigenvalue(static_cast<int>(k));
    return InvariantFunction(std::move(c));
}

struct KernelSplit {
    InvariantFunction kernel_part; // multiple of P_1
    InvariantFunction perp_part;   // zero P_0 and P_1 coefficients
};

// Orthogonal split of f - mean(f) into the Lichnerowicz kernel and its
// complement.  The mean is discarded: the corrector works in the space of
// potentials with vanishing reference mean.
inline KernelSplit project_ker(const InvariantFunction& f) {
    KernelSplit split;
    split.kernel_part = InvariantFunction::basis(1, f.coefficient(1));
    InvariantFunction perp = f;
    perp.set_coefficient(0, 0.0);
    perp.set_coefficient(1, 0.0);
    split.perp_part = std::move(perp);
    return split;
}

// Solves lich(phi) = 2u for phi orthogonal to the kernel.  The right-hand
// side must itself be orthogonal: a kernel or mean component above tolerance
// signals a broken corrector invariant upstream and is rejected.
inline InvariantFunction solve_lichnerowicz(const InvariantFunction& u,
                                            double kernel_tol = 1e-10) {
    const double scale = std::max(1.0, u.max_abs_coefficient());
    if (std::fabs(u.coefficient(0)) > kernel_tol * scale ||
        std::fabs(u.coefficient(1)) > kernel_tol * scale)
        throw precondition_error(
            "solve_lichnerowicz: right-hand side has kernel components (c0=" +
            std::to_string(u.coefficient(0)) + ", c1=" + std::to_string(u.coefficient(1)) + ")");
    std::vector<double> c(u.coefficients());
    if (!c.empty()) c[0] = 0.0;
    if (c.size() > 1) c[1] = 0.0;
    for (std::size_t k = 2; k < c.size(); ++k)
        c[k] = 2.0 * c[k] / lichnerowicz_eigenvalue(static_cast<int>(k));
    return InvariantFunction(std::move(c));
}

// Hermitian metric h = h_FS * exp(-phi) on the hyperplane bundle, with the
// positivity of the associated Kahler form enforced at construction.
class InvariantMetric {
public:
    InvariantMetric(InvariantFunction potential, MomentGrid grid, int degree_cap = 0)
        : potential_(std::move(potential)),
          grid_(std::move(grid)),
          degree_cap_(degree_cap > 0 ? degree_cap
                                     : std::max(kDefaultDegreeCap, potential_.degree())) {
        const InvariantFunction lap = laplace_fs(potential_);
        density_factor_.resize(grid_.node_count());
        double min_val = 1.0 + lap(0.0);
        min_val = std::min(min_val, 1.0 + lap(1.0));
        for (int j = 0; j < grid_.node_count(); ++j) {
            density_factor_[j] = 1.0 + lap(grid_.nodes()[j]);
            min_val = std::min(min_val, density_factor_[j]);
        }
        if (min_val <= 0.0)
            throw kahler_cone_error("potential leaves the Kahler cone: min(1+lap(phi)) = " +
                                    std::to_string(min_val));
    }

    static InvariantMetric fubini_study(MomentGrid grid, int degree_cap = 0) {
        return InvariantMetric(InvariantFunction(), std::move(grid), degree_cap);
    }

    const InvariantFunction& potential() const { return potential_; }
    const MomentGrid& grid() const { return grid_; }
    int degree_cap() const { return degree_cap_; }

    // Area density relative to the reference: 1 + lap(phi) at the nodes.
    const std::vector<double>& density_factor() const { return density_factor_; }

    double volume() const { return grid_.integrate(density_factor_); }

private:
    InvariantFunction potential_;
    MomentGrid grid_;
    int degree_cap_;
    std::vector<double> density_factor_;
};

// Integral of an invariant profile against the metric's area form.
inline double integrate(std::span<const double> profile, const InvariantMetric& g) {
    if (profile.size() != static_cast<std::size_t>(g.grid().node_count()))
        throw grid_mismatch_error("integrate: profile size does not match the metric grid");
    double acc = 0.0;
    const auto& w = g.grid().weights();
    const auto& gf = g.density_factor();
    for (std::size_t j = 0; j < profile.size(); ++j) acc += w[j] * profile[j] * gf[j];
    return acc;
}

// Scalar curvature at the grid nodes:
//   sigma = (2 - lap log(1 + lap phi)) / (1 + lap phi),
// the normalization in which the reference metric has sigma = 2 and the mean
// against any admissible area form stays 2.
inline std::vector<double> scalar_curvature(const InvariantMetric& g) {
    const auto& gf = g.density_factor();
    std::vector<double> log_gf(gf.size());
    for (std::size_t j = 0; j < gf.size(); ++j) log_gf[j] = std::log(gf[j]);
    const InvariantFunction lap_log =
        laplace_fs(InvariantFunction::from_samples(g.grid(), log_gf, g.degree_cap()));
    std::vector<double> sigma(gf.size());
    for (std::size_t j = 0; j < gf.size(); ++j)
        sigma[j] = (2.0 - lap_log(g.grid().nodes()[j])) / gf[j];
    return sigma;
}

// Moment map (Hamiltonian of the rotation) at the grid nodes:
//   x~ = x + x(1-x) phi'(x),
// a monotone bijection of [0,1] whose pushforward of the area form is the
// uniform measure (Duistermaat-Heckman).
inline std::vector<double> moment_map(const InvariantMetric& g) {
    std::vector<double> out(g.grid().node_count());
    for (int j = 0; j < g.grid().node_count(); ++j) {
        const double x = g.grid().nodes()[j];
        out[j] = x + g.potential().flux(x);
    }
    return out;
}

} // namespace berglab

#endif
