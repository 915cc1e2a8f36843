#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace lmg {

/// Phase-space point on the sphere: mu = cos(theta) is position-like,
/// phi is momentum-like; {mu, phi} = 2/N.
class ClassicalPoint {
 public:
  /// Throws DomainError if |mu| > 1 or either coordinate is not finite.
  /// phi is wrapped into [-pi, pi).
  ClassicalPoint(double mu, double phi);

  double mu() const noexcept { return mu_; }
  double phi() const noexcept { return phi_; }

 private:
  double mu_;
  double phi_;
};

/// K = 2H/N = -sqrt(1-mu^2) cos(phi) - (lambda/2)(mu^2 - (1-mu^2) sin^2(phi)).
double k_energy(const ClassicalPoint& p, double lambda);

/// (dK/dmu, dK/dphi). Throws DomainError at the poles |mu| = 1.
std::pair<double, double> grad_k(const ClassicalPoint& p, double lambda);

/// Second derivatives (K_mumu, K_muphi, K_phiphi) in the (mu, phi) chart.
struct Hessian {
  double mumu;
  double muphi;
  double phiphi;
  double determinant() const noexcept { return mumu * phiphi - muphi * muphi; }
};
Hessian hessian_k(const ClassicalPoint& p, double lambda);

enum class StationaryKind { minimum, maximum, saddle };
std::string_view to_string(StationaryKind kind) noexcept;

struct StationaryPoint {
  ClassicalPoint point;
  double k_value;
  StationaryKind kind;
  bool degenerate;  // vanishing Hessian determinant (quartic point at lambda = 1)
};

/// All stationary points of K on the sphere, sorted by (K, mu, phi).
/// Throws NumericalError if a Hessian is singular away from lambda = 1.
std::vector<StationaryPoint> stationary_points(double lambda);

/// Global extrema of K over the sphere.
double k_min(double lambda);
double k_max(double lambda);

/// The lower separatrix K_c = -1, present only for lambda > 1.
std::optional<double> separatrix_energy(double lambda);

/// (lambda + 1/lambda - 2)/2, the excitation of the separatrix above the
/// ground state in K units. DomainError for lambda < 1.
double critical_excitation(double lambda);

/// All phi in [0, pi] with K(mu, phi) = k (0, 1 or 2 values, ascending).
std::vector<double> phi_branches(double mu, double k, double lambda);

/// sqrt(1 - lambda^2) below the transition, sqrt(2(lambda^2 - 1)) above it.
/// DomainError at lambda = 1 and for negative lambda.
double harmonic_frequency(double lambda);

/// 2 pi sqrt(lambda^2 - 1) / ln N, the same-parity level spacing at the
/// separatrix in units of H. DomainError for lambda <= 1 or N < 3.
double predicted_spacing_separatrix(double lambda, int n);

/// (E/N)^(1/4): the level spacing at lambda = 1 up to an undetermined constant.
/// DomainError for negative excitation.
double quartic_spacing(double excitation_energy, int n);

}  // namespace lmg
