#include "lmg/action.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <thread>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lmg/classical.hpp"
#include "lmg/errors.hpp"

namespace lmg {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFullArea = 4.0 * kPi;
constexpr double kStripTolerance = 1e-14;

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

template <class Fn>
void for_rows(std::size_t rows, unsigned workers, Fn&& fn) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(rows)));
  if (workers == 1) {
    for (std::size_t r = 0; r < rows; ++r) fn(r);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t r = w; r < rows; r += workers) fn(r);
    });
  }
}

// phi-measure of {phi : K(mu, phi) <= k} for fixed mu.
double strip_length(double mu, double k, double lambda) {
  const double s2 = (1.0 - mu) * (1.0 + mu);
  const double s = std::sqrt(std::max(s2, 0.0));
  const double b = 0.5 * lambda * s2;
  const double a = 0.5 * lambda * (s2 - mu * mu);
  // K(x) = a - s x - b x^2, x = cos(phi); K > k on an x-interval (lo, hi).
  double lo;
  double hi;
  if (s == 0.0) return a <= k ? 2.0 * kPi : 0.0;
  if (b < 1e-14 * s) {
    lo = -1.0;
    hi = (a - k) / s;
  } else {
    const double disc = s2 - 4.0 * b * (k - a);
    if (disc <= 0.0) return 2.0 * kPi;
    const double q = -0.5 * (s + std::sqrt(disc));
    lo = q / b;
    hi = (k - a) / q;
    if (lo > hi) std::swap(lo, hi);
  }
  lo = std::max(lo, -1.0);
  hi = std::min(hi, 1.0);
  if (hi <= lo) return 2.0 * kPi;
  return 2.0 * kPi - 2.0 * (std::acos(lo) - std::acos(hi));
}

void add_quadratic_roots(double qa, double qb, double qc, std::vector<double>& s_roots) {
  if (qa == 0.0) {
    if (qb != 0.0) s_roots.push_back(-qc / qb);
    return;
  }
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return;
  const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
  s_roots.push_back(q / qa);
  if (q != 0.0) s_roots.push_back(qc / q);
}

// mu in (0, 1) where the strip length is not smooth in mu.
std::vector<double> strip_breakpoints(double k, double lambda) {
  std::vector<double> s_roots;
  // K(x = +1) = -(lambda/2)(1 - s^2) - s and K(x = -1) = -(lambda/2)(1 - s^2) + s.
  add_quadratic_roots(0.5 * lambda, -1.0, -(0.5 * lambda + k), s_roots);
  add_quadratic_roots(0.5 * lambda, 1.0, -(0.5 * lambda + k), s_roots);
  if (lambda > 0.0) {
    // Vertex x* = -1/(lambda s) enters [-1, 1] at s = 1/lambda.
    s_roots.push_back(1.0 / lambda);
    const double s2 = (k + 0.5 * lambda - 0.5 / lambda) / lambda;
    if (s2 > 0.0 && lambda * std::sqrt(s2) >= 1.0) s_roots.push_back(std::sqrt(s2));
  }
  std::vector<double> mus{0.0, 1.0};
  for (double s : s_roots) {
    if (s > 0.0 && s < 1.0) mus.push_back(std::sqrt((1.0 - s) * (1.0 + s)));
  }
  std::sort(mus.begin(), mus.end());
  mus.erase(std::unique(mus.begin(), mus.end(),
                        [](double x, double y) { return std::abs(x - y) <= 1e-15; }),
            mus.end());
  return mus;
}

}  // namespace

void validate(const Resolution& res) {
  if (res.cells < 64) {
    throw DomainError("resolution must be >= 64 cells per axis, got " + std::to_string(res.cells));
  }
}

namespace {

// Region {K <= k} of a unit cell with corners (v00, v10, v11, v01), edge
// crossings placed by linear interpolation. Saddle cells are split by the
// bilinear centre value. Calls emit(px, py, n) once per polygon.
template <class Emit>
void clip_cell(double v00, double v10, double v11, double v01, double k, Emit&& emit) {
  const std::array<double, 4> v{v00, v10, v11, v01};
  constexpr std::array<double, 4> cx{0.0, 1.0, 1.0, 0.0};
  constexpr std::array<double, 4> cy{0.0, 0.0, 1.0, 1.0};
  std::array<bool, 4> in{};
  for (int c = 0; c < 4; ++c) in[c] = v[c] <= k;
  auto crossing = [&](int e, int f, double& x, double& y) {
    const double t = (k - v[e]) / (v[f] - v[e]);
    x = cx[e] + t * (cx[f] - cx[e]);
    y = cy[e] + t * (cy[f] - cy[e]);
  };

  const bool saddle = in[0] == in[2] && in[1] == in[3] && in[0] != in[1];
  if (saddle && !(0.25 * (v00 + v10 + v11 + v01) <= k)) {
    // The inside corners are separated: one triangle each.
    for (int c = in[0] ? 0 : 1; c < 4; c += 2) {
      std::array<double, 3> px{cx[c], 0.0, 0.0};
      std::array<double, 3> py{cy[c], 0.0, 0.0};
      crossing(c, (c + 1) % 4, px[1], py[1]);
      crossing(c, (c + 3) % 4, px[2], py[2]);
      emit(px.data(), py.data(), 3);
    }
    return;
  }

  std::array<double, 8> px{};
  std::array<double, 8> py{};
  int n = 0;
  for (int e = 0; e < 4; ++e) {
    const int f = (e + 1) % 4;
    if (in[e]) {
      px[n] = cx[e];
      py[n] = cy[e];
      ++n;
    }
    if (in[e] != in[f]) {
      crossing(e, f, px[n], py[n]);
      ++n;
    }
  }
  emit(px.data(), py.data(), n);
}

}  // namespace

double cell_fraction_below(double v00, double v10, double v11, double v01, double k) {
  int inside = 0;
  for (double x : {v00, v10, v11, v01}) inside += x <= k ? 1 : 0;
  if (inside == 4) return 1.0;
  if (inside == 0) return 0.0;
  double area = 0.0;
  clip_cell(v00, v10, v11, v01, k, [&](const double* px, const double* py, int n) {
    double twice = 0.0;
    for (int i = 0; i < n; ++i) {
      const int j = (i + 1) % n;
      twice += px[i] * py[j] - px[j] * py[i];
    }
    area += 0.5 * std::abs(twice);
  });
  return std::clamp(area, 0.0, 1.0);
}

PhaseSpaceGrid::PhaseSpaceGrid(double lambda, std::size_t cells, unsigned workers)
    : lambda_(lambda), cells_(cells), workers_(workers), k_lo_(0.0), k_hi_(0.0) {
  validate({cells, AreaMethod::grid});
  const std::size_t stride = cells + 1;
  theta_.resize(stride);
  mu_.resize(stride);
  sin_theta_.resize(stride);
  for (std::size_t i = 0; i < stride; ++i) {
    theta_[i] = kPi * static_cast<double>(cells - i) / static_cast<double>(cells);
    mu_[i] = i == 0 ? -1.0 : i == cells ? 1.0 : std::cos(theta_[i]);
    sin_theta_[i] = i == 0 || i == cells ? 0.0 : std::sin(theta_[i]);
  }
  if (cells % 2 == 0) mu_[cells / 2] = 0.0;
  values_.resize(stride * stride);
  for_rows(stride, workers, [&](std::size_t i) {
    const double mu = mu_[i];
    const double s = sin_theta_[i];
    for (std::size_t j = 0; j < stride; ++j) {
      const double phi = -kPi + 2.0 * kPi * static_cast<double>(j) / cells;
      const double sphi = std::sin(phi);
      values_[i * stride + j] = -s * std::cos(phi) - 0.5 * lambda * (mu * mu - s * s * sphi * sphi);
    }
  });
  const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
  k_lo_ = *lo;
  k_hi_ = *hi;
}

// mu-measure (per unit phi index) of the part of cell (i, j) below k. The
// lattice is uniform in theta, so the polygon from clip_cell is weighted by
// sin(theta) exactly: the integral of sin(theta) dtheta over a polygon equals
// the contour integral of cos(theta) along its edges (in lattice units).
double PhaseSpaceGrid::cell_measure(std::size_t i, std::size_t j, double k, double full) const {
  const double v00 = node(i, j), v10 = node(i + 1, j), v11 = node(i + 1, j + 1), v01 = node(i, j + 1);
  int inside = 0;
  for (double x : {v00, v10, v11, v01}) inside += x <= k ? 1 : 0;
  if (inside == 4) return full;
  if (inside == 0) return 0.0;
  const double t0 = theta_[i];
  const double dt = theta_[i + 1] - t0;
  double measure = 0.0;
  clip_cell(v00, v10, v11, v01, k, [&](const double* px, const double* py, int n) {
    double loop = 0.0;
    for (int a = 0; a < n; ++a) {
      const int b = (a + 1) % n;
      const double dv = py[b] - py[a];
      if (dv == 0.0) continue;
      const double ta = t0 + px[a] * dt;
      const double tb = t0 + px[b] * dt;
      const double half = 0.5 * (tb - ta);
      const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
      loop += dv * std::cos(ta + half) * sinc;
    }
    measure += std::abs(loop);
  });
  return std::clamp(measure, 0.0, full);
}

double PhaseSpaceGrid::area_below(double k) const {
  if (k < k_lo_) return 0.0;
  if (k >= k_hi_) return kFullArea;
  std::vector<double> rows(cells_);
  for_rows(cells_, workers_, [&](std::size_t i) {
    std::vector<double> weights(cells_);
    const double full = mu_[i + 1] - mu_[i];
    for (std::size_t j = 0; j < cells_; ++j) {
      weights[j] = cell_measure(i, j, k, full);
    }
    rows[i] = pairwise_sum(weights);
  });
  return std::min(pairwise_sum(rows) * (2.0 * kPi / cells_), kFullArea);
}

double strip_area(double k, double lambda) {
  if (k < k_min(lambda)) return 0.0;
  if (k >= k_max(lambda)) return kFullArea;
  const auto mus = strip_breakpoints(k, lambda);
  boost::math::quadrature::tanh_sinh<double> integrator;
  auto f = [&](double mu) { return strip_length(mu, k, lambda); };
  double half = 0.0;
  for (std::size_t i = 0; i + 1 < mus.size(); ++i) {
    half += integrator.integrate(f, mus[i], mus[i + 1], kStripTolerance);
  }
  return std::clamp(2.0 * half, 0.0, kFullArea);
}

ActionFunction::ActionFunction(double lambda, Resolution res, unsigned workers)
    : lambda_(lambda), res_(res) {
  validate(res);
  if (res.method == AreaMethod::grid) grid_.emplace_back(lambda, res.cells, workers);
}

double ActionFunction::operator()(double k) const {
  return grid_.empty() ? strip_area(k, lambda_) : grid_.front().area_below(k);
}

double area_below(double k, double lambda, Resolution res) {
  return ActionFunction(lambda, res)(k);
}

double counting_function(double k, const ModelParams& params, Resolution res) {
  return counting_function(k, params, ActionFunction(params.coupling(), res));
}

double counting_function(double k, const ModelParams& params, const ActionFunction& action) {
  return action(k) / (2.0 * kPi * params.hbar_eff());
}

double period(double k, double lambda, Resolution res) {
  return period(k, ActionFunction(lambda, res));
}

double period(double k, const ActionFunction& action) {
  const double lambda = action.lambda();
  const double lo = k_min(lambda);
  const double hi = k_max(lambda);
  if (!(k > lo && k < hi)) {
    throw DomainError("period requires K_min < k < K_max, got k=" + std::to_string(k));
  }
  double dist = std::min(k - lo, hi - k);
  for (const auto& sp : stationary_points(lambda)) dist = std::min(dist, std::abs(k - sp.k_value));
  // slack so that k = K_c +- 1e-6 written in decimal is not refused by rounding
  if (dist < 1e-6 * (1.0 - 1e-9)) {
    throw DomainError("k=" + std::to_string(k) +
                      " is within 1e-6 of a stationary energy; use the asymptotic form");
  }
  const double h = std::min(1e-4, dist / 10.0);
  return (action(k + h) - action(k - h)) / (2.0 * h);
}

namespace {

double solve_action(const ActionFunction& action, double target, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= 1e-14 * std::max(1.0, std::abs(mid)) || mid == lo || mid == hi) return mid;
    if (action(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<WkbLevel> wkb_levels(const ModelParams& params, std::size_t count, Resolution res) {
  if (count > static_cast<std::size_t>(params.n_particles())) {
    throw DomainError("wkb_levels count must be <= N");
  }
  const double lambda = params.coupling();
  const ActionFunction action(lambda, res);
  const double quantum = 2.0 * kPi * params.hbar_eff();
  const double lo = k_min(lambda);
  const double hi = k_max(lambda);
  const double total = action(hi);

  std::vector<WkbLevel> out;
  std::size_t n = 0;
  double floor_k = lo;
  if (const auto kc = separatrix_energy(lambda)) {
    const double below = action(*kc);
    for (; out.size() < count; ++n) {
      const double target = quantum * (static_cast<double>(n) + 0.5);
      if (2.0 * target >= below) break;
      const double k = solve_action(action, 2.0 * target, lo, *kc);
      for (int copy = 0; copy < 2 && out.size() < count; ++copy) {
        out.push_back({out.size(), k, params.unscaled(k), true});
      }
    }
    n = out.size();
    while (quantum * (static_cast<double>(n) + 0.5) <= below) ++n;
    floor_k = *kc;
  }
  for (; out.size() < count; ++n) {
    const double target = quantum * (static_cast<double>(n) + 0.5);
    if (target > total) {
      throw NumericalError("WKB bracket failure: level " + std::to_string(n) +
                           " exceeds the available phase space");
    }
    const double k = solve_action(action, target, floor_k, hi);
    out.push_back({out.size(), k, params.unscaled(k), false});
  }
  return out;
}

ActionTable action_table(double lambda, std::size_t count, Resolution res) {
  const ActionFunction action(lambda, res);
  const double lo = k_min(lambda);
  const double hi = k_max(lambda);
  ActionTable table{lambda, res,
                    res.method == AreaMethod::strip
                        ? kStripTolerance
                        : (2.0 / res.cells) * (2.0 * kPi / res.cells),
                    {}};
  for (std::size_t i = 0; i < count; ++i) {
    const double k = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    double t = std::numeric_limits<double>::quiet_NaN();
    try {
      t = period(k, action);
    } catch (const DomainError&) {
    }
    table.samples.push_back({k, action(k), t});
  }
  return table;
}

}  // namespace lmg
