#include "lmg/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "lmg/errors.hpp"

namespace lmg {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSafeMin = std::numeric_limits<double>::min();
constexpr int kMaxBisectionSteps = 200;
constexpr int kMaxInverseIterations = 10;

double pivot_floor(const SymmetricTridiagonal& t) {
  double max_b2 = 1.0;
  for (double b : t.offdiag) max_b2 = std::max(max_b2, b * b);
  return kSafeMin * max_b2;
}

std::size_t count_below(const SymmetricTridiagonal& t, double x, double pivmin) {
  std::size_t count = 0;
  double d = t.diag[0] - x;
  if (std::abs(d) < pivmin) d = -pivmin;
  if (d < 0.0) ++count;
  for (std::size_t i = 1; i < t.diag.size(); ++i) {
    const double b = t.offdiag[i - 1];
    d = (t.diag[i] - x) - b * b / d;
    if (std::abs(d) < pivmin) d = -pivmin;
    if (d < 0.0) ++count;
  }
  return count;
}

double norm1(const SymmetricTridiagonal& t) {
  double norm = 0.0;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(t.diag[i]);
    if (i > 0) row += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) row += std::abs(t.offdiag[i]);
    norm = std::max(norm, row);
  }
  return norm;
}

void check_shape(const SymmetricTridiagonal& t) {
  if (t.diag.empty()) throw DomainError("tridiagonal matrix must have dimension >= 1");
  if (t.offdiag.size() + 1 != t.diag.size()) {
    throw DomainError("offdiag length must be dim - 1");
  }
}

// Pivoted LU of (T - shift I) in the LAPACK dgttrf layout.
struct TridiagonalLU {
  std::vector<double> lower, diag, upper, upper2;
  std::vector<bool> swapped;

  TridiagonalLU(const SymmetricTridiagonal& t, double shift, double tiny) {
    const std::size_t n = t.size();
    diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = t.diag[i] - shift;
    lower = t.offdiag;
    upper = t.offdiag;
    upper2.assign(n > 2 ? n - 2 : 0, 0.0);
    swapped.assign(n > 0 ? n - 1 : 0, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(diag[i]) >= std::abs(lower[i])) {
        const double fact = diag[i] != 0.0 ? lower[i] / diag[i] : 0.0;
        lower[i] = fact;
        diag[i + 1] -= fact * upper[i];
      } else {
        const double fact = diag[i] / lower[i];
        diag[i] = lower[i];
        lower[i] = fact;
        const double temp = upper[i];
        upper[i] = diag[i + 1];
        diag[i + 1] = temp - fact * diag[i + 1];
        if (i + 2 < n) {
          upper2[i] = upper[i + 1];
          upper[i + 1] = -fact * upper[i + 1];
        }
        swapped[i] = true;
      }
    }
    for (double& d : diag) {
      if (std::abs(d) < tiny) d = d < 0.0 ? -tiny : tiny;
    }
  }

  void solve_in_place(std::vector<double>& b) const {
    const std::size_t n = diag.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!swapped[i]) {
        b[i + 1] -= lower[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - lower[i] * b[i];
      }
    }
    for (std::size_t r = n; r-- > 0;) {
      double acc = b[r];
      if (r + 1 < n) acc -= upper[r] * b[r + 1];
      if (r + 2 < n) acc -= upper2[r] * b[r + 2];
      b[r] = acc / diag[r];
    }
  }
};

double normalize(std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0 || !std::isfinite(norm)) return norm;
  for (double& x : v) x /= norm;
  return norm;
}

void fix_sign(std::vector<double>& v) {
  for (double x : v) {
    if (std::abs(x) > 1e-8) {
      if (x < 0.0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

}  // namespace

std::size_t sturm_count(const SymmetricTridiagonal& t, double x) {
  check_shape(t);
  return count_below(t, x, pivot_floor(t));
}

Interval gershgorin_bounds(const SymmetricTridiagonal& t) {
  check_shape(t);
  const std::size_t n = t.size();
  Interval iv{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(t.offdiag[i - 1]);
    if (i + 1 < n) radius += std::abs(t.offdiag[i]);
    iv.lo = std::min(iv.lo, t.diag[i] - radius);
    iv.hi = std::max(iv.hi, t.diag[i] + radius);
  }
  return iv;
}

double eigenvalue(const SymmetricTridiagonal& t, std::size_t k) {
  check_shape(t);
  const std::size_t n = t.size();
  if (k >= n) {
    throw IndexError("eigenvalue index " + std::to_string(k) + " out of range for dimension " +
                     std::to_string(n));
  }
  if (n == 1) return t.diag[0];
  if (std::all_of(t.offdiag.begin(), t.offdiag.end(), [](double b) { return b == 0.0; })) {
    std::vector<double> d = t.diag;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    return d[k];
  }

  const double pivmin = pivot_floor(t);
  const Interval g = gershgorin_bounds(t);
  const double scale = std::max(std::abs(g.lo), std::abs(g.hi));
  const double abs_tol = kEps * scale + pivmin;
  const double pad = 2.0 * kEps * scale + 2.0 * pivmin;
  double lo = g.lo - pad;
  double hi = g.hi + pad;
  if (count_below(t, lo, pivmin) > k || count_below(t, hi, pivmin) <= k) {
    throw NumericalError("bisection failed to bracket eigenvalue " + std::to_string(k));
  }
  for (int step = 0; step < kMaxBisectionSteps; ++step) {
    const double mid = lo + 0.5 * (hi - lo);
    const double width_tol = 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) + abs_tol;
    if (hi - lo <= width_tol || mid == lo || mid == hi) return mid;
    if (count_below(t, mid, pivmin) <= k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NumericalError("bisection did not converge for eigenvalue " + std::to_string(k));
}

std::vector<double> eigenvalues(const SymmetricTridiagonal& t, unsigned workers) {
  check_shape(t);
  return eigenvalues(t, 0, t.size(), workers);
}

std::vector<double> eigenvalues(const SymmetricTridiagonal& t, std::size_t first, std::size_t last,
                                unsigned workers) {
  check_shape(t);
  if (first > last || last > t.size()) throw IndexError("eigenvalue index range out of bounds");
  const std::size_t count = last - first;
  std::vector<double> values(count);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) values[i] = eigenvalue(t, first + i);
    return values;
  }

  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      pool.emplace_back([&, w, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) values[i] = eigenvalue(t, first + i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return values;
}

std::vector<double> multiply(const SymmetricTridiagonal& t, std::span<const double> x) {
  const std::size_t n = t.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = t.diag[i] * x[i];
    if (i > 0) acc += t.offdiag[i - 1] * x[i - 1];
    if (i + 1 < n) acc += t.offdiag[i] * x[i + 1];
    y[i] = acc;
  }
  return y;
}

double residual_norm(const SymmetricTridiagonal& t, double value, std::span<const double> v) {
  const auto tv = multiply(t, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < tv.size(); ++i) {
    const double r = tv[i] - value * v[i];
    sum += r * r;
  }
  return std::sqrt(sum);
}

std::vector<double> inverse_iteration(const SymmetricTridiagonal& t, double value) {
  check_shape(t);
  const std::size_t n = t.size();
  if (n == 1) return {1.0};
  if (std::all_of(t.offdiag.begin(), t.offdiag.end(), [](double b) { return b == 0.0; })) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(t.diag[i] - value) < std::abs(t.diag[best] - value)) best = i;
    std::vector<double> v(n, 0.0);
    v[best] = 1.0;
    return v;
  }

  const double scale = std::max(norm1(t), 1.0);
  const TridiagonalLU lu(t, value, kEps * scale);
  const double target = 1e-10 * std::max(1.0, std::abs(value));

  // Fixed-seed start vector; the engine output (unlike std distributions) is
  // specified bit-for-bit by the standard.
  std::mt19937_64 engine(0x1f2e3d4c5b6a7988ULL);
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5;
  normalize(v);

  for (int it = 0; it < kMaxInverseIterations; ++it) {
    lu.solve_in_place(v);
    const double norm = normalize(v);
    if (!(norm > 0.0) || !std::isfinite(norm)) break;
    if (residual_norm(t, value, v) <= target) {
      fix_sign(v);
      return v;
    }
  }
  throw NumericalError("inverse iteration did not converge for eigenvalue " + std::to_string(value));
}

TridiagonalEigenpair eigenpair(const SymmetricTridiagonal& t, std::size_t k) {
  const double value = eigenvalue(t, k);
  return {value, inverse_iteration(t, value)};
}

}  // namespace lmg
