#ifndef BERGLAB_EXPANSION_HPP
#define BERGLAB_EXPANSION_HPP

#include <algorithm>
#include <cmath>
#include <set>
#include <span>
#include <vector>

#include "berglab/bergman.hpp"
#include "berglab/detail/lstsq.hpp"
#include "berglab/errors.hpp"
#include "berglab/geom.hpp"

namespace berglab {

// Extraction of the small-q expansion coefficients of the Bergman density,
//   K(q,h) = 1 + a1 q + a2 q^2 + ...,
// by per-node least squares over a list of section powers, and the check of
// the curvature identity a1 = sigma/2.

struct FitOptions {
    int order = 2;             // highest fitted power of q (2 or 3)
    bool free_constant = false; // fit the constant term instead of pinning it to 1
};

struct ExpansionFit {
    std::vector<int> m_list;
    std::vector<double> constant;  // per node; identically 1 unless free_constant
    std::vector<double> a1;        // per node
    std::vector<double> a2;        // per node
    std::vector<double> a3;        // per node, only for order 3
    double residual_norm = 0.0;    // sup-norm of the fit residual at the largest m
    double condition = 0.0;        // conditioning estimate of the design matrix
};

namespace detail {

inline std::vector<int> checked_m_list(std::span<const int> m_list, int minimum_count,
                                       int minimum_power) {
    std::set<int> distinct(m_list.begin(), m_list.end());
    if (static_cast<int>(distinct.size()) < minimum_count)
        throw fit_error("fit needs at least " + std::to_string(minimum_count) +
                        " distinct powers, got " + std::to_string(distinct.size()));
    if (*distinct.begin() < minimum_power)
        throw fit_error("fit powers must be >= " + std::to_string(minimum_power));
    return {distinct.begin(), distinct.end()};
}

} // namespace detail

inline ExpansionFit fit_expansion(const InvariantMetric& g, std::span<const int> m_list,
                                  FitOptions options = {}) {
    if (options.order != 2 && options.order != 3)
        throw fit_error("fit order must be 2 or 3");
    const std::vector<int> powers = detail::checked_m_list(m_list, 3, 8);
    if (options.order == 3 && powers.size() < 5)
        throw fit_error("cubic fit needs at least 5 distinct powers");

    const int rows = static_cast<int>(powers.size());
    const int cols = options.order + (options.free_constant ? 1 : 0);
    std::vector<double> design(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r) {
        const double q = 1.0 / powers[r];
        int c = 0;
        if (options.free_constant) design[c++ * rows + r] = 1.0;
        double qp = q;
        for (int p = 1; p <= options.order; ++p, qp *= q) design[c++ * rows + r] = qp;
    }
    detail::SmallLstsq lstsq(std::move(design), rows, cols);
    const double condition = lstsq.condition_estimate();
    if (condition > 1e10)
        throw fit_error("fit is ill-conditioned: nearly collinear powers of q (estimate " +
                        std::to_string(condition) + ")");

    const int n = g.grid().node_count();
    std::vector<DensityProfile> profiles;
    profiles.reserve(powers.size());
    for (int m : powers) profiles.push_back(density(m, g));

    ExpansionFit fit;
    fit.m_list = powers;
    fit.condition = condition;
    fit.constant.assign(n, 1.0);
    fit.a1.assign(n, 0.0);
    fit.a2.assign(n, 0.0);
    if (options.order == 3) fit.a3.assign(n, 0.0);

    std::vector<double> rhs(rows);
    for (int j = 0; j < n; ++j) {
        for (int r = 0; r < rows; ++r)
            rhs[r] = profiles[r].values[j] - (options.free_constant ? 0.0 : 1.0);
        const std::vector<double> coef = lstsq.solve(rhs);
        int c = 0;
        if (options.free_constant) fit.constant[j] = coef[c++];
        fit.a1[j] = coef[c++];
        fit.a2[j] = coef[c++];
        if (options.order == 3) fit.a3[j] = coef[c++];
    }

    // Residual at the largest power (smallest q).
    const double q_top = 1.0 / powers.back();
    const auto& top = profiles.back().values;
    for (int j = 0; j < n; ++j) {
        double model = fit.constant[j] + fit.a1[j] * q_top + fit.a2[j] * q_top * q_top;
        if (options.order == 3) model += fit.a3[j] * q_top * q_top * q_top;
        fit.residual_norm = std::max(fit.residual_norm, std::fabs(top[j] - model));
    }
    return fit;
}

// Sup-norm discrepancy between the fitted a1 and sigma/2 computed from the
// metric directly.
inline double verify_a1(const InvariantMetric& g, std::span<const int> m_list,
                        FitOptions options = {}) {
    const ExpansionFit fit = fit_expansion(g, m_list, options);
    const std::vector<double> sigma = scalar_curvature(g);
    double gap = 0.0;
    for (std::size_t j = 0; j < sigma.size(); ++j)
        gap = std::max(gap, std::fabs(fit.a1[j] - 0.5 * sigma[j]));
    return gap;
}

} // namespace berglab

#endif
