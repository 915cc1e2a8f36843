#include "lmg/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lmg/errors.hpp"

namespace lmg {
namespace {

constexpr double kPi = std::numbers::pi;

double wrap_phi(double phi) {
  double w = std::fmod(phi + kPi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  w -= kPi;
  return w >= kPi ? -kPi : w;
}

void require_interior(const ClassicalPoint& p) {
  if (std::abs(p.mu()) >= 1.0) {
    throw DomainError("(mu, phi) chart is singular at the poles |mu| = 1");
  }
}

// Newton polish of a seed on grad K = 0; stationary seeds are exact up to
// rounding, so a handful of steps suffices.
ClassicalPoint polish(ClassicalPoint p, double lambda) {
  for (int it = 0; it < 8; ++it) {
    const auto [gm, gp] = grad_k(p, lambda);
    if (std::hypot(gm, gp) <= 1e-14) break;
    const Hessian h = hessian_k(p, lambda);
    const double det = h.determinant();
    if (std::abs(det) < 1e-14) break;
    const double dm = (h.phiphi * gm - h.muphi * gp) / det;
    const double dp = (h.mumu * gp - h.muphi * gm) / det;
    p = ClassicalPoint(std::clamp(p.mu() - dm, -1.0 + 1e-15, 1.0 - 1e-15), p.phi() - dp);
  }
  return p;
}

}  // namespace

ClassicalPoint::ClassicalPoint(double mu, double phi) : mu_(mu), phi_(0.0) {
  if (!std::isfinite(mu) || !std::isfinite(phi) || std::abs(mu) > 1.0) {
    throw DomainError("classical point out of range: mu=" + std::to_string(mu) +
                      " phi=" + std::to_string(phi));
  }
  phi_ = wrap_phi(phi);
}

double k_energy(const ClassicalPoint& p, double lambda) {
  const double mu = p.mu();
  const double s2 = 1.0 - mu * mu;
  const double sphi = std::sin(p.phi());
  return -std::sqrt(s2) * std::cos(p.phi()) - 0.5 * lambda * (mu * mu - s2 * sphi * sphi);
}

std::pair<double, double> grad_k(const ClassicalPoint& p, double lambda) {
  require_interior(p);
  const double mu = p.mu();
  const double s = std::sqrt(1.0 - mu * mu);
  const double c = std::cos(p.phi());
  const double sn = std::sin(p.phi());
  const double d_mu = (mu / s) * c - lambda * mu * (1.0 + sn * sn);
  const double d_phi = s * sn + lambda * s * s * sn * c;
  return {d_mu, d_phi};
}

Hessian hessian_k(const ClassicalPoint& p, double lambda) {
  require_interior(p);
  const double mu = p.mu();
  const double s2 = 1.0 - mu * mu;
  const double s = std::sqrt(s2);
  const double c = std::cos(p.phi());
  const double sn = std::sin(p.phi());
  return {
      c / (s2 * s) - lambda * (1.0 + sn * sn),
      -(mu / s) * sn - 2.0 * lambda * mu * sn * c,
      s * c + lambda * s2 * (c * c - sn * sn),
  };
}

std::string_view to_string(StationaryKind kind) noexcept {
  switch (kind) {
    case StationaryKind::minimum: return "minimum";
    case StationaryKind::maximum: return "maximum";
    case StationaryKind::saddle: return "saddle";
  }
  return "?";
}

std::vector<StationaryPoint> stationary_points(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw DomainError("stationary_points requires lambda >= 0");
  }
  std::vector<ClassicalPoint> seeds{{0.0, 0.0}, {0.0, kPi}};
  if (lambda > 1.0) {
    const double mu0 = std::sqrt(1.0 - 1.0 / (lambda * lambda));
    const double phi_star = std::acos(-1.0 / lambda);
    seeds.emplace_back(mu0, 0.0);
    seeds.emplace_back(-mu0, 0.0);
    seeds.emplace_back(0.0, phi_star);
    seeds.emplace_back(0.0, -phi_star);
  }

  const bool near_transition = std::abs(lambda - 1.0) < 1e-9;
  std::vector<StationaryPoint> out;
  for (const auto& seed : seeds) {
    const ClassicalPoint p = polish(seed, lambda);
    const Hessian h = hessian_k(p, lambda);
    const double det = h.determinant();
    const double k = k_energy(p, lambda);
    StationaryPoint sp{p, k, StationaryKind::saddle, false};
    if (std::abs(det) < 1e-12) {
      if (!near_transition) {
        throw NumericalError("singular Hessian at mu=" + std::to_string(p.mu()) +
                             " phi=" + std::to_string(p.phi()) +
                             " for lambda=" + std::to_string(lambda));
      }
      // Quartic points: the origin is the global minimum, (0, pi) the maximum.
      sp.degenerate = true;
      sp.kind = k < 0.0 ? StationaryKind::minimum : StationaryKind::maximum;
    } else if (det < 0.0) {
      sp.kind = StationaryKind::saddle;
    } else {
      sp.kind = h.mumu > 0.0 ? StationaryKind::minimum : StationaryKind::maximum;
    }
    out.push_back(sp);
  }
  std::sort(out.begin(), out.end(), [](const StationaryPoint& a, const StationaryPoint& b) {
    if (a.k_value != b.k_value) return a.k_value < b.k_value;
    if (a.point.mu() != b.point.mu()) return a.point.mu() < b.point.mu();
    return a.point.phi() < b.point.phi();
  });
  return out;
}

double k_min(double lambda) { return lambda <= 1.0 ? -1.0 : -0.5 * (lambda + 1.0 / lambda); }

double k_max(double lambda) { return lambda <= 1.0 ? 1.0 : 0.5 * (lambda + 1.0 / lambda); }

std::optional<double> separatrix_energy(double lambda) {
  if (lambda > 1.0) return -1.0;
  return std::nullopt;
}

double critical_excitation(double lambda) {
  if (!(lambda >= 1.0)) throw DomainError("critical_excitation requires lambda >= 1");
  return 0.5 * (lambda + 1.0 / lambda - 2.0);
}

std::vector<double> phi_branches(double mu, double k, double lambda) {
  if (!(std::abs(mu) < 1.0)) throw DomainError("phi_branches requires |mu| < 1");
  const double s2 = 1.0 - mu * mu;
  const double s = std::sqrt(s2);
  // K(x) = a - s x - b x^2 with x = cos(phi).
  const double b = 0.5 * lambda * s2;
  const double a = 0.5 * lambda * (s2 - mu * mu);
  std::vector<double> xs;
  if (lambda * s2 < 1e-14) {
    xs.push_back((a - k) / s);
  } else {
    const double disc = s2 - 4.0 * b * (k - a);
    if (disc < 0.0) return {};
    const double r = std::sqrt(disc);
    // Numerically stable pair of roots of b x^2 + s x + (k - a) = 0.
    const double q = -0.5 * (s + r);
    const double x1 = q / b;
    const double x2 = q != 0.0 ? (k - a) / q : x1;
    xs.push_back(x1);
    if (disc > 0.0) xs.push_back(x2);
  }
  std::vector<double> phis;
  for (double x : xs) {
    if (x >= -1.0 && x <= 1.0) phis.push_back(std::acos(x));
  }
  std::sort(phis.begin(), phis.end());
  phis.erase(std::unique(phis.begin(), phis.end()), phis.end());
  return phis;
}

double harmonic_frequency(double lambda) {
  if (!(lambda >= 0.0)) throw DomainError("harmonic_frequency requires lambda >= 0");
  if (lambda == 1.0) throw DomainError("harmonic_frequency undefined at lambda = 1 (quartic point)");
  return lambda < 1.0 ? std::sqrt(1.0 - lambda * lambda) : std::sqrt(2.0 * (lambda * lambda - 1.0));
}

double predicted_spacing_separatrix(double lambda, int n) {
  if (!(lambda > 1.0)) throw DomainError("separatrix spacing requires lambda > 1");
  if (n < 3) throw DomainError("separatrix spacing requires N >= 3");
  return 2.0 * kPi * std::sqrt(lambda * lambda - 1.0) / std::log(static_cast<double>(n));
}

double quartic_spacing(double excitation_energy, int n) {
  if (!(excitation_energy >= 0.0)) throw DomainError("excitation energy must be >= 0");
  if (n < 1) throw DomainError("N must be >= 1");
  return std::pow(excitation_energy / n, 0.25);
}

}  // namespace lmg
