#ifndef BERGLAB_LEGENDRE_HPP
#define BERGLAB_LEGENDRE_HPP

#include <cmath>
#include <span>
#include <vector>

namespace berglab {

// Legendre polynomials P_k on [-1,1] by the three-term recurrence
//   (k+1) P_{k+1}(s) = (2k+1) s P_k(s) - k P_{k-1}(s).
inline void legendre_values(double s, int kmax, std::span<double> out) {
    out[0] = 1.0;
    if (kmax >= 1) out[1] = s;
    for (int k = 1; k < kmax; ++k)
        out[k + 1] = ((2 * k + 1) * s * out[k] - k * out[k - 1]) / (k + 1);
}

inline std::vector<double> legendre_values(double s, int kmax) {
    std::vector<double> out(static_cast<std::size_t>(kmax) + 1);
    legendre_values(s, kmax, out);
    return out;
}

// Gauss-Legendre rule on (0,1): Newton iteration on P_n from the Chebyshev
// initial guess, then the nodes are mapped from (-1,1).
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule gauss_legendre_01(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < (n + 1) / 2; ++k) {
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15 * std::max(1.0, std::fabs(x))) {
                // one clean-up step, then stop
                p0 = 1.0;
                p1 = x;
                for (int j = 2; j <= n; ++j) {
                    const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // descending x corresponds to ascending node order after the flip below
        rule.nodes[k] = 0.5 * (1.0 - x);
        rule.nodes[n - 1 - k] = 0.5 * (1.0 + x);
        rule.weights[k] = 0.5 * w;
        rule.weights[n - 1 - k] = 0.5 * w;
    }
    return rule;
}

} // namespace berglab

#endif
