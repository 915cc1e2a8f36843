#pragma once

#include <cstddef>
#include <vector>

#include "lmg/model.hpp"

namespace lmg {

/// How the phase-space area S(k) = |{(mu, phi) : K <= k}| is evaluated.
///  - grid:  marching-squares cells on a cells x cells lattice uniform in
///           (theta, phi), mu = cos(theta); each clipped cell polygon is
///           weighted by the exact area element. Second order in the spacing.
///  - strip: closed-form phi-measure per mu strip, integrated over mu with
///           tanh-sinh quadrature between analytic breakpoints (~1e-13).
enum class AreaMethod { grid, strip };

struct Resolution {
  std::size_t cells = 256;
  AreaMethod method = AreaMethod::grid;
};

/// Throws DomainError unless cells >= 64.
void validate(const Resolution& res);

/// K sampled on the lattice nodes for one coupling; reusable across k.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(double lambda, std::size_t cells, unsigned workers = 1);

  double lambda() const noexcept { return lambda_; }
  std::size_t cells() const noexcept { return cells_; }
  double area_below(double k) const;

 private:
  double node(std::size_t i, std::size_t j) const { return values_[i * (cells_ + 1) + j]; }
  double cell_measure(std::size_t i, std::size_t j, double k, double full) const;

  double lambda_;
  std::size_t cells_;
  unsigned workers_;
  double k_lo_;
  double k_hi_;
  std::vector<double> theta_;      // pi (1 - i/cells), so mu_i = cos(theta_i) ascends
  std::vector<double> mu_;
  std::vector<double> sin_theta_;
  std::vector<double> values_;     // row i: theta_i, column j: phi_j
};

/// Fraction of the unit cell where K <= k, with crossings placed by linear
/// interpolation along the edges; corners (v00, v10, v11, v01) run
/// counter-clockwise from the origin.
double cell_fraction_below(double v00, double v10, double v11, double v01, double k);

/// Strip-integral route for S(k).
double strip_area(double k, double lambda);

/// S(k) evaluator that caches the lattice when method == grid.
class ActionFunction {
 public:
  ActionFunction(double lambda, Resolution res, unsigned workers = 1);
  double operator()(double k) const;
  double lambda() const noexcept { return lambda_; }
  const Resolution& resolution() const noexcept { return res_; }

 private:
  double lambda_;
  Resolution res_;
  std::vector<PhaseSpaceGrid> grid_;  // empty for the strip route
};

/// S(k) in (mu, phi) units; 0 below K_min, 4 pi above K_max.
double area_below(double k, double lambda, Resolution res = {});

/// Smoothed number of states below k: S(k) / (2 pi hbar_eff) = N S / (4 pi).
double counting_function(double k, const ModelParams& params, Resolution res = {});
double counting_function(double k, const ModelParams& params, const ActionFunction& action);

/// dS/dk by a symmetric difference with step min(1e-4, dist/10), where dist is
/// the distance to the nearest stationary K. Throws DomainError outside
/// (K_min, K_max) or within 1e-6 of a stationary value.
double period(double k, double lambda, Resolution res = {256, AreaMethod::strip});
double period(double k, const ActionFunction& action);

struct WkbLevel {
  std::size_t index;
  double k_value;
  double energy;
  bool doublet;  // member of a degenerate below-separatrix pair
};

/// Levels from S_eff(K) = 2 pi hbar_eff (n + 1/2), S_eff = S/2 per well below
/// the separatrix (each solution emitted twice) and S above it.
/// Throws DomainError if count > N, NumericalError if the phase space runs out.
std::vector<WkbLevel> wkb_levels(const ModelParams& params, std::size_t count,
                                 Resolution res = {});

struct ActionSample {
  double k;
  double action;
  double period;  // NaN where period() refuses (stationary values)
};

struct ActionTable {
  double lambda;
  Resolution resolution;
  double quadrature_tolerance;
  std::vector<ActionSample> samples;  // k ascending
};

/// S and T on `count` midpoints of [K_min, K_max].
ActionTable action_table(double lambda, std::size_t count, Resolution res = {});

}  // namespace lmg
