#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lmg {

/// Real symmetric tridiagonal matrix; offdiag[i] couples rows i and i+1.
struct SymmetricTridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t size() const noexcept { return diag.size(); }
};

/// Number of eigenvalues strictly below x (Sturm sequence count via LDL^T).
std::size_t sturm_count(const SymmetricTridiagonal& t, double x);

/// Gershgorin interval [lo, hi] containing the whole spectrum.
struct Interval {
  double lo;
  double hi;
};
Interval gershgorin_bounds(const SymmetricTridiagonal& t);

/// k-th smallest eigenvalue (0-based) by Sturm bisection, refined to a few ulps.
/// Throws IndexError for k >= size and NumericalError when the bracket collapses
/// or the iteration cap is reached.
double eigenvalue(const SymmetricTridiagonal& t, std::size_t k);

/// All eigenvalues, ascending. Each index is bisected independently, so the
/// result does not depend on `workers`.
std::vector<double> eigenvalues(const SymmetricTridiagonal& t, unsigned workers = 1);

/// Eigenvalues with indices [first, last), ascending.
std::vector<double> eigenvalues(const SymmetricTridiagonal& t, std::size_t first, std::size_t last,
                                unsigned workers = 1);

struct TridiagonalEigenpair {
  double value;
  std::vector<double> vector;  // unit norm, first component above 1e-8 is positive
};

/// Eigenvector for a converged eigenvalue by inverse iteration on the pivoted
/// LU of (T - value*I). Throws NumericalError after 10 unsuccessful refinements.
std::vector<double> inverse_iteration(const SymmetricTridiagonal& t, double value);

/// k-th ascending eigenpair.
TridiagonalEigenpair eigenpair(const SymmetricTridiagonal& t, std::size_t k);

/// ||T v - value v||_2.
double residual_norm(const SymmetricTridiagonal& t, double value, std::span<const double> v);

/// y = T x.
std::vector<double> multiply(const SymmetricTridiagonal& t, std::span<const double> x);

}  // namespace lmg
