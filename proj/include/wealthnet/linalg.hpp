#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace wealthnet {

// Dense LU with partial pivoting, sized for the implicit integrator's
// per-stage solves. Row-major storage.
class LuFactors {
 public:
  // Factors a in place. Throws std::domain_error on an exactly singular
  // pivot; near-singularity is the caller's business via condition_1().
  LuFactors(std::vector<double> a, std::size_t n) : lu_(std::move(a)), n_(n) {
    if (lu_.size() != n * n)
      throw std::invalid_argument("LuFactors: size mismatch");
    piv_.resize(n);
    norm1_ = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double colsum = 0.0;
      for (std::size_t i = 0; i < n; ++i) colsum += std::abs(lu_[i * n + j]);
      if (colsum > norm1_) norm1_ = colsum;
    }
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_[k * n + k]);
      for (std::size_t i = k + 1; i < n; ++i) {
        const double v = std::abs(lu_[i * n + k]);
        if (v > best) {
          best = v;
          p = i;
        }
      }
      piv_[k] = p;
      if (p != k)
        for (std::size_t j = 0; j < n; ++j)
          std::swap(lu_[k * n + j], lu_[p * n + j]);
      const double pivot = lu_[k * n + k];
      if (pivot == 0.0 || !std::isfinite(pivot))
        throw std::domain_error("LuFactors: singular matrix");
      for (std::size_t i = k + 1; i < n; ++i) {
        const double f = lu_[i * n + k] / pivot;
        lu_[i * n + k] = f;
        for (std::size_t j = k + 1; j < n; ++j)
          lu_[i * n + j] -= f * lu_[k * n + j];
      }
    }
  }

  std::size_t dim() const { return n_; }

  void solve(std::vector<double>& b) const { solve_impl(b, false); }
  void solve_transposed(std::vector<double>& b) const { solve_impl(b, true); }

  // 1-norm condition estimate: ||A||_1 times Higham's iterative estimate
  // of ||A^-1||_1 (a handful of solves, no explicit inverse).
  double condition_1() const {
    if (n_ == 0) return 1.0;
    std::vector<double> x(n_, 1.0 / static_cast<double>(n_));
    double inv_norm = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
      solve(x);
      double nx = 0.0;
      for (double v : x) nx += std::abs(v);
      if (nx > inv_norm) inv_norm = nx; else if (iter > 0) break;
      std::vector<double> xi(n_);
      for (std::size_t i = 0; i < n_; ++i)
        xi[i] = x[i] >= 0.0 ? 1.0 : -1.0;
      solve_transposed(xi);
      std::size_t jmax = 0;
      double vmax = 0.0;
      for (std::size_t i = 0; i < n_; ++i) {
        const double v = std::abs(xi[i]);
        if (v > vmax) {
          vmax = v;
          jmax = i;
        }
      }
      x.assign(n_, 0.0);
      x[jmax] = 1.0;
    }
    return norm1_ * inv_norm;
  }

 private:
  void solve_impl(std::vector<double>& b, bool transposed) const {
    if (b.size() != n_) throw std::invalid_argument("LuFactors: rhs size");
    if (!transposed) {
      for (std::size_t k = 0; k < n_; ++k) {
        if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
        for (std::size_t i = k + 1; i < n_; ++i) b[i] -= lu_[i * n_ + k] * b[k];
      }
      for (std::size_t k = n_; k-- > 0;) {
        b[k] /= lu_[k * n_ + k];
        for (std::size_t i = 0; i < k; ++i) b[i] -= lu_[i * n_ + k] * b[k];
      }
    } else {
      // A^T x = b via U^T then L^T, undoing pivots last.
      for (std::size_t k = 0; k < n_; ++k) {
        for (std::size_t i = 0; i < k; ++i) b[k] -= lu_[i * n_ + k] * b[i];
        b[k] /= lu_[k * n_ + k];
      }
      for (std::size_t k = n_; k-- > 0;) {
        for (std::size_t i = k + 1; i < n_; ++i) b[k] -= lu_[i * n_ + k] * b[i];
        if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
      }
    }
  }

  std::vector<double> lu_;
  std::vector<std::size_t> piv_;
  std::size_t n_ = 0;
  double norm1_ = 0.0;
};

}  // namespace wealthnet
