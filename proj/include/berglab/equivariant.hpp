#ifndef BERGLAB_EQUIVARIANT_HPP
#define BERGLAB_EQUIVARIANT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "berglab/bergman.hpp"
#include "berglab/errors.hpp"
#include "berglab/geom.hpp"
#include "berglab/rational.hpp"

namespace berglab {

// Lifts of the torus action to powers of the bundle, their weight ladders,
// and the character integrals obstructing semistability.  A lift at power m
// shifts the weight ladder of the monomial sections; it is encoded by one
// rational constant per power (the linearization constant divided by m, so
// lifts at different powers compare on the bundle itself).
//
// Convention: the lifted action of the rotation field on a metric h has
//   h^{-1}(Xh) = c_rho - x~
// with x~ the moment map.  This is the unique real normalization for which
// the character is metric- and power-independent, vanishes exactly under
// trace-free (SL) normalization, and matches the section-weight identity
// checked by weight_identity_gap below.

class Lift {
public:
    static Lift constant(Rational c) {
        Lift lift;
        lift.constant_ = c;
        lift.is_constant_ = true;
        return lift;
    }

    // Trace-free normalization: the mean of the weight ladder 0..m is m/2,
    // so the per-power constant is 1/2 for every m.
    static Lift sl() { return constant(Rational(1, 2)); }

    static Lift table(std::map<int, Rational> per_power) {
        Lift lift;
        lift.table_ = std::move(per_power);
        lift.is_constant_ = false;
        return lift;
    }

    Rational at(int m) const {
        if (is_constant_) return constant_;
        const auto it = table_.find(m);
        if (it == table_.end())
            throw precondition_error("lift: no constant configured for power " +
                                     std::to_string(m));
        return it->second;
    }

    bool constant_on(std::span<const int> m_list) const {
        if (is_constant_) return true;
        if (m_list.empty()) return true;
        const Rational first = at(m_list[0]);
        for (int m : m_list)
            if (at(m) != first) return false;
        return true;
    }

private:
    Rational constant_{0, 1};
    bool is_constant_ = true;
    std::map<int, Rational> table_;
};

// Centered weight ladder of the monomial sections at power m: alpha_i = i - m/2.
// Half-integers for odd m are kept exact.
struct WeightVector {
    int power = 0;
    std::vector<Rational> weights;
};

inline WeightVector sl_weights(int m) {
    if (m < 1) throw precondition_error("sl_weights: power must be >= 1");
    WeightVector wv;
    wv.power = m;
    wv.weights.reserve(m + 1);
    for (int i = 0; i <= m; ++i) wv.weights.push_back(Rational(2 * i - m, 2));
    return wv;
}

// Hamiltonian of the lifted rotation at the grid nodes: theta = c_rho(m) - x~.
inline std::vector<double> holomorphy_potential(const InvariantMetric& g, const Lift& lift,
                                                int m) {
    const double c = lift.at(m).to_double();
    std::vector<double> theta = moment_map(g);
    for (double& v : theta) v = c - v;
    return theta;
}

// Power-normalized character: chi_m = (n+1) * int theta omega = 2 * int theta omega here.
inline double chi(const Lift& lift, int m, const InvariantMetric& g) {
    const std::vector<double> theta = holomorphy_potential(g, lift, m);
    return 2.0 * integrate(theta, g);
}

// The obstruction character itself: m^{n+1} chi_m = m^2 chi_m on this testbed.
inline double obstruction(const Lift& lift, int m, const InvariantMetric& g) {
    return static_cast<double>(m) * m * chi(lift, m, g);
}

// Two independent routes to the lifted action of the rotation on the section
// embedding metric: (left) the holomorphy potential of the pullback metric
// through the generic moment-map machinery, (right) the weighted mean of the
// normalized section norms.  Returns their sup-norm gap over the grid.
inline double weight_identity_gap(int m, const InvariantMetric& g) {
    const SectionGram gr = gram(m, g);
    const WeightVector wv = sl_weights(m);

    const InvariantMetric pullback = fs_pullback(m, g);
    const std::vector<double> lhs = holomorphy_potential(pullback, Lift::sl(), m);

    const auto& nodes = g.grid().nodes();
    std::vector<double> u(m + 1);
    double gap = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        detail::monomial_norms(m, nodes[j], u);
        double num = 0.0, den = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double ui = u[i] / gr.diag[i];
            num += wv.weights[i].to_double() * ui;
            den += ui;
        }
        const double rhs = -num / (m * den);
        gap = std::max(gap, std::fabs(lhs[j] - rhs));
    }
    return gap;
}

// Residual of the character orthogonality on a family of metrics indexed by
// power (the corrector's realized metrics): max over m of |chi|.
inline double character_residual(const Lift& lift, std::span<const int> m_list,
                                 const std::function<InvariantMetric(int)>& metric_at) {
    double residual = 0.0;
    for (int m : m_list) residual = std::max(residual, std::fabs(chi(lift, m, metric_at(m))));
    return residual;
}

inline double character_residual(const Lift& lift, std::span<const int> m_list,
                                 const InvariantMetric& g) {
    return character_residual(lift, m_list, [&](int) { return g; });
}

// Consistency report for a lift with equal constants across a power list:
// the character is one number for the whole list, and it vanishes under the
// trace-free normalization.
struct CharacterReport {
    std::vector<int> m_list;
    std::vector<double> chi_values;
    std::vector<double> obstruction_values;
    double max_chi_spread = 0.0;
    bool sl_normalized = false;
    bool pass = false;
    std::string reason;
};

inline CharacterReport character_report(const Lift& lift, std::span<const int> m_list,
                                        const InvariantMetric& g, double tol = 1e-8) {
    if (m_list.size() < 3)
        throw precondition_error("character_report: need at least 3 powers");
    if (!lift.constant_on(m_list))
        throw hypothesis_error(
            "character_report: lift constants differ across the power list");
    CharacterReport report;
    report.m_list.assign(m_list.begin(), m_list.end());
    report.sl_normalized = lift.at(m_list[0]) == Rational(1, 2);
    for (int m : m_list) {
        const double c = chi(lift, m, g);
        report.chi_values.push_back(c);
        report.obstruction_values.push_back(static_cast<double>(m) * m * c);
    }
    double lo = report.chi_values[0], hi = lo;
    for (double c : report.chi_values) {
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    report.max_chi_spread = hi - lo;
    report.pass = report.max_chi_spread <= tol;
    if (report.pass && report.sl_normalized) {
        for (double o : report.obstruction_values)
            if (std::fabs(o) > tol) report.pass = false;
        if (!report.pass) report.reason = "nonzero character under SL normalization";
    } else if (!report.pass) {
        report.reason = "character varies across powers";
    }
    if (report.pass && !report.sl_normalized) {
        // m-independence holds for any fixed lift; vanishing needs SL.
        for (double c : report.chi_values)
            if (std::fabs(c) > tol) {
                report.pass = false;
                report.reason = "nonzero character";
            }
    }
    return report;
}

// Stability of a lift family along an increasing power sequence: true when
// the constants agree from some index onward (a constant tail of length >= 2).
// k0 is the 1-based index where the constant tail begins.
struct StabilityResult {
    bool stable = false;
    int k0 = 0;
};

inline StabilityResult lift_stability_check(const Lift& lift, std::span<const int> sequence) {
    StabilityResult result;
    if (sequence.size() < 2) {
        result.stable = true;
        result.k0 = 1;
        return result;
    }
    const Rational tail_value = lift.at(sequence.back());
    int start = static_cast<int>(sequence.size()) - 1;
    while (start > 0 && lift.at(sequence[start - 1]) == tail_value) --start;
    const int tail_length = static_cast<int>(sequence.size()) - start;
    result.stable = tail_length >= 2;
    result.k0 = result.stable ? start + 1 : 0;
    return result;
}

} // namespace berglab

#endif
