#ifndef BERGLAB_MOMENT_GRID_HPP
#define BERGLAB_MOMENT_GRID_HPP

#include <algorithm>
#include <cassert>
#include <span>
#include <string>
#include <vector>

#include "berglab/errors.hpp"
#include "berglab/legendre.hpp"

namespace berglab {

// Gauss-Legendre quadrature on the moment interval (0,1).  All invariant
// integrals over the sphere reduce to integrals against this rule, so the grid
// is the single discretization object of the library.  Grids are reproducible
// from the node count alone.
class MomentGrid {
public:
    // Sizing rule: integrands x^i (1-x)^{m-i} concentrate as m grows, so the
    // node count scales with the largest section power a run will touch.
    static int node_count_for_power(int m_max) {
        return std::max(8 * m_max + 64, 256);
    }

    static MomentGrid for_max_power(int m_max) {
        return MomentGrid(node_count_for_power(m_max), m_max);
    }

    explicit MomentGrid(int node_count, int design_max_power = 0) {
        assert(node_count > 0);
        GaussRule rule = gauss_legendre_01(node_count);
        nodes_ = std::move(rule.nodes);
        weights_ = std::move(rule.weights);
        design_max_power_ = design_max_power > 0 ? design_max_power
                                                 : std::max((node_count - 64) / 8, 1);
    }

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int design_max_power() const { return design_max_power_; }
    bool resolves_power(int m) const { return m <= design_max_power_; }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    // Quadrature of a nodal profile, fixed ascending summation order.
    double integrate(std::span<const double> values) const {
        check_size(values.size(), "integrate");
        double acc = 0.0;
        for (std::size_t j = 0; j < nodes_.size(); ++j) acc += weights_[j] * values[j];
        return acc;
    }

    // Legendre coefficients of a nodal profile:
    //   c_k = (2k+1) * int_0^1 f(x) P_k(2x-1) dx.
    std::vector<double> project_legendre(std::span<const double> values, int degree) const {
        check_size(values.size(), "project_legendre");
        std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1, 0.0);
        std::vector<double> p(static_cast<std::size_t>(degree) + 1);
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            legendre_values(2.0 * nodes_[j] - 1.0, degree, p);
            const double wf = weights_[j] * values[j];
            for (int k = 0; k <= degree; ++k) coeffs[k] += wf * p[k];
        }
        for (int k = 0; k <= degree; ++k) coeffs[k] *= 2 * k + 1;
        return coeffs;
    }

    friend bool operator==(const MomentGrid& a, const MomentGrid& b) {
        return a.node_count() == b.node_count();
    }

private:
    void check_size(std::size_t n, const char* where) const {
        if (n != nodes_.size())
            throw grid_mismatch_error(std::string(where) + ": profile has " + std::to_string(n) +
                                      " values, grid has " + std::to_string(nodes_.size()) +
                                      " nodes");
    }

    std::vector<double> nodes_;
    std::vector<double> weights_;
    int design_max_power_ = 0;
};

} // namespace berglab

#endif
