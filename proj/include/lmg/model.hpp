#pragma once

#include <string_view>
#include <vector>

namespace lmg {

/// Coupling and particle number of H = J_z + (lambda/N)(J_x^2 - J_y^2).
///
/// The spin is j = N/2 and the effective Planck constant of the
/// semiclassical picture is hbar_eff = 2/N.
class ModelParams {
 public:
  /// Throws InvalidParams if n_particles < 1 or coupling is negative/non-finite.
  ModelParams(double coupling, int n_particles);

  double coupling() const noexcept { return coupling_; }
  int n_particles() const noexcept { return n_; }
  double spin() const noexcept { return 0.5 * n_; }
  /// Twice the spin, i.e. N; exact integer arithmetic for half-integer m.
  int two_j() const noexcept { return n_; }
  double hbar_eff() const noexcept { return 2.0 / n_; }

  /// Scaled energy K = 2E/N. The only place this conversion happens.
  double scaled(double energy) const noexcept { return 2.0 * energy / n_; }
  double unscaled(double k) const noexcept { return 0.5 * n_ * k; }

  bool operator==(const ModelParams&) const = default;

 private:
  double coupling_;
  int n_;
};

/// Parity of m + j, i.e. of the number of quanta above m = -j.
enum class Parity { even = 0, odd = 1 };

std::string_view to_string(Parity p) noexcept;

/// J_z eigenvalues spanning one parity sector, stored as 2m.
struct SectorBasis {
  Parity parity;
  std::vector<int> two_m;  // strictly increasing, stride 4 (m stride 2)

  std::size_t size() const noexcept { return two_m.size(); }
  double m(std::size_t i) const noexcept { return 0.5 * two_m[i]; }
};

SectorBasis sector_basis(const ModelParams& params, Parity parity);

}  // namespace lmg
