#pragma once

// Dense row-major matrices and the spectral utilities used by the analysis:
// induced norms, Perron root by power iteration, and the spectrum of a
// reversible matrix via cyclic Jacobi rotations.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "specmix/error.hpp"

namespace specmix {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw ContractError("ragged matrix rows");
      std::copy(rows[i].begin(), rows[i].end(), m.data_.begin() + static_cast<std::ptrdiff_t>(i * c));
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const { return data_; }

  std::vector<std::vector<double>> to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
    return out;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw ContractError("matrix shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw ContractError("matrix shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      double* out = c.data_.data() + i * c.cols_;
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        const double* brow = b.data_.data() + k * b.cols_;
        for (std::size_t j = 0; j < b.cols_; ++j) out[j] += aik * brow[j];
      }
    }
    return c;
  }

  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != cols_) throw ContractError("vector length mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  double max_abs_diff(const Matrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw ContractError("matrix shape mismatch");
    double m = 0.0;
    for (std::size_t k = 0; k < data_.size(); ++k) m = std::max(m, std::abs(data_[k] - o.data_[k]));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// M^k by repeated squaring.
inline Matrix power(const Matrix& m, unsigned long long k) {
  if (!m.square()) throw ContractError("power of a non-square matrix");
  Matrix result = Matrix::identity(m.rows());
  Matrix base = m;
  while (k > 0) {
    if (k & 1ULL) result = result * base;
    k >>= 1ULL;
    if (k > 0) base = base * base;
  }
  return result;
}

enum class NormKind { one, infinity };

/// Induced 1-norm (max column sum) or infinity-norm (max row sum).
inline double induced_norm(const Matrix& m, NormKind kind) {
  double best = 0.0;
  if (kind == NormKind::infinity) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double s = 0.0;
      for (double x : m.row(i)) s += std::abs(x);
      best = std::max(best, s);
    }
  } else {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
      best = std::max(best, s);
    }
  }
  return best;
}

struct SpectralRadius {
  double value = 0.0;
  /// Collatz-Wielandt bracket width (max minus min ratio) at the last iterate.
  double residual = 0.0;
  int iterations = 0;
  bool converged = true;
};

/// Strongly connected components of the support digraph of a square matrix
/// (edge i -> j when m(i, j) != 0), by Tarjan's algorithm.
inline std::vector<std::vector<std::size_t>> support_components(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::vector<std::size_t>> comps;
  std::vector<long> index(n, -1);
  std::vector<long> low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::size_t> stack;
  long counter = 0;
  auto visit = [&](auto&& self, std::size_t v) -> void {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (std::size_t w = 0; w < n; ++w) {
      if (m(v, w) == 0.0) continue;
      if (index[w] < 0) {
        self(self, w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w = 0;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) visit(visit, v);
  return comps;
}

/// Perron root of a nonnegative square matrix.
///
/// The root is the largest Perron root over the irreducible diagonal blocks
/// of the support digraph. On each block the iteration runs on M + I from the
/// all-ones vector: the shift keeps the Perron vector and makes rho + 1
/// strictly dominant, so periodic blocks (bipartite influence patterns)
/// converge instead of oscillating. For a positive iterate x the
/// Collatz-Wielandt ratios (Mx)_i / x_i bracket rho; iteration stops once
/// successive estimates differ by less than `tol` and the bracket width is
/// below `tol`, or after `max_iter` steps. `residual` is the bracket width.
inline SpectralRadius spectral_radius(const Matrix& m, double tol = 1e-10, int max_iter = 100000) {
  if (!m.square()) throw ContractError("spectral radius of a non-square matrix");
  SpectralRadius out;
  if (m.rows() == 0) return out;
  for (double x : m.data()) {
    if (x < 0.0) throw ContractError("spectral radius expects a nonnegative matrix");
  }
  if (std::all_of(m.data().begin(), m.data().end(), [](double x) { return x == 0.0; })) return out;

  for (const auto& comp : support_components(m)) {
    const std::size_t k = comp.size();
    if (k == 1 && m(comp[0], comp[0]) == 0.0) continue;
    std::vector<double> x(k, 1.0 / static_cast<double>(k));
    std::vector<double> y(k);
    double previous = -1.0;
    SpectralRadius block;
    block.converged = false;
    for (int it = 1; it <= max_iter; ++it) {
      for (std::size_t a = 0; a < k; ++a) {
        double s = x[a];
        for (std::size_t b = 0; b < k; ++b) s += m(comp[a], comp[b]) * x[b];
        y[a] = s;
      }
      // x is nonnegative with unit 1-norm, so |y|_1 is the growth factor.
      const double growth = std::accumulate(y.begin(), y.end(), 0.0);
      const double estimate = growth - 1.0;
      double lo = std::numeric_limits<double>::infinity();
      double hi = 0.0;
      for (std::size_t a = 0; a < k; ++a) {
        const double ratio = y[a] / x[a] - 1.0;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      for (std::size_t a = 0; a < k; ++a) x[a] = y[a] / growth;
      block.value = std::max(0.0, estimate);
      block.iterations = it;
      block.residual = hi - lo;
      if (std::abs(estimate - previous) < tol && hi - lo < tol) {
        block.converged = true;
        break;
      }
      previous = estimate;
    }
    out.iterations += block.iterations;
    out.converged = out.converged && block.converged;
    if (block.value > out.value) {
      out.value = block.value;
      out.residual = block.residual;
    }
  }
  return out;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
inline std::vector<double> jacobi_eigenvalues(Matrix a, double off_tol = 1e-12, int max_sweeps = 100) {
  if (!a.square()) throw ContractError("eigenvalues of a non-square matrix");
  const std::size_t n = a.rows();
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < max_sweeps && off_norm() >= off_tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

/// Largest |pi(x)P(x,y) - pi(y)P(y,x)| over all state pairs.
inline double detailed_balance_residual(const Matrix& p, std::span<const double> pi) {
  if (!p.square() || pi.size() != p.rows()) throw ContractError("detailed balance shape mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = i + 1; j < p.cols(); ++j)
      worst = std::max(worst, std::abs(pi[i] * p(i, j) - pi[j] * p(j, i)));
  return worst;
}

/// Real spectrum of a matrix reversible with respect to the positive weights
/// `pi`, obtained from the symmetric conjugate diag(sqrt pi) M diag(1/sqrt pi).
inline std::vector<double> symmetric_eigenvalues(const Matrix& m, std::span<const double> pi,
                                                 double balance_tol = 1e-10) {
  if (!m.square() || pi.size() != m.rows()) throw ContractError("eigen problem shape mismatch");
  for (double w : pi) {
    if (!(w > 0.0)) throw ContractError("reversibility weights must be positive");
  }
  if (detailed_balance_residual(m, pi) > balance_tol) {
    throw NotReversibleError("matrix is not reversible with respect to the given weights");
  }
  const std::size_t n = m.rows();
  std::vector<double> root(n);
  for (std::size_t i = 0; i < n; ++i) root[i] = std::sqrt(pi[i]);
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) s(i, j) = root[i] * m(i, j) / root[j];
  // Average the two triangles so rounding in pi does not leak asymmetry.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }
  return jacobi_eigenvalues(std::move(s));
}

}  // namespace specmix
