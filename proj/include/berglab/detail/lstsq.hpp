#ifndef BERGLAB_DETAIL_LSTSQ_HPP
#define BERGLAB_DETAIL_LSTSQ_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "berglab/errors.hpp"

namespace berglab::detail {

// Dense least squares by Householder QR for the tiny regression problems of
// the coefficient-extraction fits (a handful of rows, at most four columns).
// The factorization is done once and applied to one right-hand side per grid
// node.
class SmallLstsq {
public:
    // `a` is column-major, rows x cols, rows >= cols.
    SmallLstsq(std::vector<double> a, int rows, int cols)
        : a_(std::move(a)), rows_(rows), cols_(cols), beta_(cols, 0.0) {
        for (int k = 0; k < cols_; ++k) {
            double norm = 0.0;
            for (int i = k; i < rows_; ++i) norm += at(i, k) * at(i, k);
            norm = std::sqrt(norm);
            if (norm == 0.0) throw fit_error("least squares: zero column in design matrix");
            double alpha = at(k, k) > 0 ? -norm : norm;
            const double v0 = at(k, k) - alpha;
            beta_[k] = -1.0 / (alpha * v0);
            at(k, k) = v0;
            for (int j = k + 1; j < cols_; ++j) {
                double dot = 0.0;
                for (int i = k; i < rows_; ++i) dot += at(i, k) * at(i, j);
                dot *= beta_[k];
                for (int i = k; i < rows_; ++i) at(i, j) -= dot * at(i, k);
            }
            diag_.push_back(alpha);
        }
    }

    // Ratio of extreme R diagonal magnitudes, a cheap conditioning estimate.
    double condition_estimate() const {
        double lo = std::fabs(diag_[0]), hi = lo;
        for (double d : diag_) {
            lo = std::min(lo, std::fabs(d));
            hi = std::max(hi, std::fabs(d));
        }
        return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
    }

    std::vector<double> solve(std::span<const double> b) const {
        std::vector<double> y(b.begin(), b.end());
        for (int k = 0; k < cols_; ++k) {
            double dot = 0.0;
            for (int i = k; i < rows_; ++i) dot += at(i, k) * y[i];
            dot *= beta_[k];
            for (int i = k; i < rows_; ++i) y[i] -= dot * at(i, k);
        }
        std::vector<double> x(cols_);
        for (int k = cols_ - 1; k >= 0; --k) {
            double acc = y[k];
            for (int j = k + 1; j < cols_; ++j) acc -= at(k, j) * x[j];
            x[k] = acc / diag_[k];
        }
        return x;
    }

private:
    double& at(int i, int j) { return a_[static_cast<std::size_t>(j) * rows_ + i]; }
    double at(int i, int j) const { return a_[static_cast<std::size_t>(j) * rows_ + i]; }

    std::vector<double> a_;
    int rows_;
    int cols_;
    std::vector<double> beta_;
    std::vector<double> diag_;
};

} // namespace berglab::detail

#endif
