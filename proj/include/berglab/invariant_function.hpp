#ifndef BERGLAB_INVARIANT_FUNCTION_HPP
#define BERGLAB_INVARIANT_FUNCTION_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "berglab/legendre.hpp"
#include "berglab/moment_grid.hpp"

namespace berglab {

// A smooth circle-invariant function on the sphere, stored as a truncated
// Legendre series in the moment coordinate x in [0,1]:
//   f(x) = sum_k c_k P_k(2x-1).
// The mean of f against the reference area form equals c_0.
class InvariantFunction {
public:
    InvariantFunction() = default;
    explicit InvariantFunction(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {}

    static InvariantFunction basis(int k, double scale = 1.0) {
        std::vector<double> c(static_cast<std::size_t>(k) + 1, 0.0);
        c[k] = scale;
        return InvariantFunction(std::move(c));
    }

    static InvariantFunction from_samples(const MomentGrid& grid,
                                          std::span<const double> values, int degree) {
        return InvariantFunction(grid.project_legendre(values, degree));
    }

    // Highest stored coefficient index (zero function has degree 0).
    int degree() const { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }

    double coefficient(int k) const {
        return k < static_cast<int>(coeffs_.size()) ? coeffs_[k] : 0.0;
    }

    void set_coefficient(int k, double value) {
        if (k >= static_cast<int>(coeffs_.size())) coeffs_.resize(k + 1, 0.0);
        coeffs_[k] = value;
    }

    const std::vector<double>& coefficients() const { return coeffs_; }

    double mean() const { return coefficient(0); }

    double operator()(double x) const {
        const double s = 2.0 * x - 1.0;
        double acc = 0.0, p0 = 1.0, p1 = s;
        for (std::size_t k = 0; k < coeffs_.size(); ++k) {
            double p;
            if (k == 0) p = p0;
            else if (k == 1) p = p1;
            else {
                p = ((2.0 * k - 1.0) * s * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p;
            }
            acc += coeffs_[k] * p;
        }
        return acc;
    }

    // The edge-weighted derivative x(1-x) f'(x), the flux whose x-derivative
    // is the invariant Laplacian.  Uses (1-s^2) P_k'(s) = k (P_{k-1} - s P_k),
    // which stays exact at the endpoints.
    double flux(double x) const {
        if (coeffs_.size() < 2) return 0.0;
        const double s = 2.0 * x - 1.0;
        std::vector<double> p(coeffs_.size());
        legendre_values(s, degree(), p);
        double acc = 0.0;
        for (std::size_t k = 1; k < coeffs_.size(); ++k)
            acc += coeffs_[k] * k * (p[k - 1] - s * p[k]);
        return 0.5 * acc;
    }

    std::vector<double> sample(const MomentGrid& grid) const {
        std::vector<double> out(grid.node_count());
        for (int j = 0; j < grid.node_count(); ++j) out[j] = (*this)(grid.nodes()[j]);
        return out;
    }

    std::vector<double> sample_flux(const MomentGrid& grid) const {
        std::vector<double> out(grid.node_count());
        for (int j = 0; j < grid.node_count(); ++j) out[j] = flux(grid.nodes()[j]);
        return out;
    }

    double sup_norm(const MomentGrid& grid) const {
        double m = 0.0;
        for (int j = 0; j < grid.node_count(); ++j)
            m = std::max(m, std::fabs((*this)(grid.nodes()[j])));
        return m;
    }

    double max_abs_coefficient() const {
        double m = 0.0;
        for (double c : coeffs_) m = std::max(m, std::fabs(c));
        return m;
    }

    // Drop trailing coefficients below `eps` (keeps at least c_0).
    void trim(double eps = 0.0) {
        while (coeffs_.size() > 1 && std::fabs(coeffs_.back()) <= eps) coeffs_.pop_back();
    }

    InvariantFunction& operator+=(const InvariantFunction& other) {
        if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
        for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
        return *this;
    }

    InvariantFunction& operator-=(const InvariantFunction& other) {
        if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), 0.0);
        for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
        return *this;
    }

    InvariantFunction& operator*=(double a) {
        for (double& c : coeffs_) c *= a;
        return *this;
    }

    friend InvariantFunction operator+(InvariantFunction a, const InvariantFunction& b) {
        a += b;
        return a;
    }
    friend InvariantFunction operator-(InvariantFunction a, const InvariantFunction& b) {
        a -= b;
        return a;
    }
    friend InvariantFunction operator*(double a, InvariantFunction f) {
        f *= a;
        return f;
    }

private:
    std::vector<double> coeffs_;
};

} // namespace berglab

#endif
