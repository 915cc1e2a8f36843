#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lmg/action.hpp"
#include "lmg/spectrum.hpp"

namespace lmg {

/// Ordinary least-squares line. For power-law fits the line lives in
/// (ln x, ln y) and amplitude = exp(intercept); for inverse-log fits slope is
/// the prefactor f of f / ln N and the intercept is pinned to zero.
struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double amplitude = 0.0;
  double r_squared = 0.0;
  std::size_t n_points = 0;
  double residual_max = 0.0;
};

/// Unweighted least squares y = slope * x + intercept. Needs >= 3 finite points.
FitResult fit_line(std::span<const double> xs, std::span<const double> ys);

/// ln y = slope ln x + intercept. DomainError on non-positive input.
FitResult fit_power_law(std::span<const double> xs, std::span<const double> ys);

/// spacing = f / ln N by regression through the origin in 1/ln N.
FitResult fit_inverse_log(std::span<const int> ns, std::span<const double> spacings);

struct SeparatrixSpacing {
  double spacing;        // forward same-parity spacing E_{i+1} - E_i at at_level
  Level at_level;        // level nearest the separatrix
  double window_min;     // smallest same-parity spacing with |K - K_c| <= 0.1
  bool warning;          // spacing and window_min differ by more than 2x
};

/// The separatrix is located at E_0 + (N/2) * critical_excitation(lambda), so the
/// measurement is unchanged by a global energy shift.
/// DomainError for lambda <= 1; NumericalError if the window is empty.
SeparatrixSpacing measure_separatrix_spacing(const Spectrum& spectrum, double lambda);

/// Level whose centred same-parity spacing (E_{i+1} - E_{i-1})/2 is smallest in
/// the lower half of its sector. Absent for lambda <= 1.
std::optional<Level> minimal_gap_level(const Spectrum& spectrum, double lambda);

/// Norm fraction carried by the n lowest-m components.
double localization_fraction(std::span<const double> components, std::size_t n_components);

struct NeighborFraction {
  int offset;  // -3..3 excluding 0
  Level level;
  double fraction;
};

struct LocalizationReport {
  Level level;
  double fraction;
  std::vector<NeighborFraction> neighbors;  // same-parity, within +-3, existing only
};

/// Fraction for `pair` plus its +-3 same-parity neighbours in `spectrum`.
LocalizationReport localization_report(const Spectrum& spectrum, const Eigenpair& pair,
                                       std::size_t n_components = 20);

struct Histogram {
  std::vector<double> bin_edges;  // bins + 1, strictly increasing
  std::vector<double> counts;     // integer counts, or density if normalized
  bool density = false;
};

/// Equal-width bins over [E_min, E_max]; the top edge is inclusive.
Histogram dos_histogram(const Spectrum& spectrum, std::size_t bins, bool density = false);

struct DoubletDecay {
  FitResult fit;                  // ln(splitting) against N
  std::vector<int> ns;            // all requested N
  std::vector<double> splittings; // ground-doublet splitting per N
  std::vector<bool> flagged;      // below resolution, excluded from the fit
};

/// Ground-doublet splitting for each N and the fit of its logarithm against N.
/// InsufficientData if fewer than 3 splittings are resolved.
DoubletDecay doublet_decay_fit(double lambda, std::span<const int> ns);

struct StaircaseDeviation {
  double max_deviation;
  int offset;  // global integer alignment applied to the smooth count
  std::size_t samples;
};

/// Max |exact staircase - counting_function - offset| over the level energies,
/// excluding |K - K_c| < 0.05 and the outer 2% of [K_min, K_max].
StaircaseDeviation staircase_deviation(const Spectrum& spectrum, Resolution res = {});

}  // namespace lmg
