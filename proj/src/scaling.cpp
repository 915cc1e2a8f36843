#include "lmg/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lmg/classical.hpp"
#include "lmg/errors.hpp"

namespace lmg {
namespace {

void require_fit_input(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("fit inputs differ in length");
  if (xs.size() < 3) {
    throw InsufficientData("fit needs at least 3 points, got " + std::to_string(xs.size()));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw DomainError("fit input " + std::to_string(i) + " is not finite");
    }
  }
}

double r_squared(std::span<const double> ys, double ss_res) {
  double mean = 0.0;
  for (double y : ys) mean += y;
  mean /= static_cast<double>(ys.size());
  double ss_tot = 0.0;
  for (double y : ys) ss_tot += (y - mean) * (y - mean);
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

std::vector<double> sector_energies(const Spectrum& spectrum, Parity parity) {
  std::vector<double> out;
  for (const auto& level : spectrum.sector(parity)) out.push_back(level.energy);
  return out;
}

}  // namespace

FitResult fit_line(std::span<const double> xs, std::span<const double> ys) {
  require_fit_input(xs, ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit abscissae are all equal");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.amplitude = fit.intercept;
  fit.n_points = xs.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += r * r;
    fit.residual_max = std::max(fit.residual_max, std::abs(r));
  }
  fit.r_squared = r_squared(ys, ss_res);
  return fit;
}

FitResult fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  require_fit_input(xs, ys);
  std::vector<double> lx(xs.size());
  std::vector<double> ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw DomainError("power-law fit needs positive data (point " + std::to_string(i) + ")");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  FitResult fit = fit_line(lx, ly);
  fit.amplitude = std::exp(fit.intercept);
  return fit;
}

FitResult fit_inverse_log(std::span<const int> ns, std::span<const double> spacings) {
  if (ns.size() != spacings.size()) throw DomainError("fit inputs differ in length");
  std::vector<double> xs(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 3) throw DomainError("inverse-log fit needs N >= 3");
    if (!(spacings[i] > 0.0)) throw DomainError("inverse-log fit needs positive spacings");
    xs[i] = 1.0 / std::log(static_cast<double>(ns[i]));
  }
  require_fit_input(xs, spacings);

  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += xs[i] * xs[i];
    sxy += xs[i] * spacings[i];
  }
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = 0.0;
  fit.amplitude = fit.slope;
  fit.n_points = xs.size();
  double ss_res = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = spacings[i] - fit.slope * xs[i];
    ss_res += r * r;
    fit.residual_max = std::max(fit.residual_max, std::abs(r));
  }
  fit.r_squared = r_squared(spacings, ss_res);
  return fit;
}

SeparatrixSpacing measure_separatrix_spacing(const Spectrum& spectrum, double lambda) {
  if (!(lambda > 1.0)) throw DomainError("separatrix spacing requires lambda > 1");
  const auto& params = spectrum.params;
  const double target = spectrum.ground().energy + params.unscaled(critical_excitation(lambda));

  const Level* nearest = nullptr;
  for (const auto& level : spectrum.levels) {
    if (nearest == nullptr || std::abs(level.energy - target) < std::abs(nearest->energy - target)) {
      nearest = &level;
    }
  }

  SeparatrixSpacing out{0.0, *nearest, std::numeric_limits<double>::infinity(), false};
  for (Parity parity : {Parity::even, Parity::odd}) {
    const auto energies = sector_energies(spectrum, parity);
    if (energies.size() < 2) continue;
    if (parity == nearest->parity) {
      const std::size_t i = nearest->sector_index;
      out.spacing = i + 1 < energies.size() ? energies[i + 1] - energies[i]
                                            : energies[i] - energies[i - 1];
    }
    for (std::size_t i = 0; i + 1 < energies.size(); ++i) {
      if (std::abs(params.scaled(energies[i] - target)) <= 0.1) {
        out.window_min = std::min(out.window_min, energies[i + 1] - energies[i]);
      }
    }
  }
  if (!std::isfinite(out.window_min) || !(out.spacing > 0.0)) {
    throw NumericalError("no same-parity spacing inside the separatrix window");
  }
  const double ratio = out.spacing / out.window_min;
  out.warning = ratio > 2.0 || ratio < 0.5;
  return out;
}

std::optional<Level> minimal_gap_level(const Spectrum& spectrum, double lambda) {
  if (!(lambda > 1.0)) return std::nullopt;
  std::optional<Level> best;
  double best_spacing = std::numeric_limits<double>::infinity();
  for (Parity parity : {Parity::even, Parity::odd}) {
    const auto levels = spectrum.sector(parity);
    const std::size_t upper = std::min(levels.size() / 2, levels.size() - 1);
    for (std::size_t i = 1; i < upper; ++i) {
      const double centred = 0.5 * (levels[i + 1].energy - levels[i - 1].energy);
      if (centred < best_spacing) {
        best_spacing = centred;
        best = levels[i];
      }
    }
  }
  return best;
}

double localization_fraction(std::span<const double> components, std::size_t n_components) {
  if (n_components > components.size()) {
    throw IndexError("n_components " + std::to_string(n_components) + " exceeds dimension " +
                     std::to_string(components.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n_components; ++i) sum += components[i] * components[i];
  return std::min(sum, 1.0);
}

LocalizationReport localization_report(const Spectrum& spectrum, const Eigenpair& pair,
                                       std::size_t n_components) {
  LocalizationReport report{pair.level, localization_fraction(pair.components, n_components), {}};
  const auto sector = spectrum.sector(pair.level.parity);
  const auto centre = static_cast<long>(pair.level.sector_index);
  for (int offset = -3; offset <= 3; ++offset) {
    const long idx = centre + offset;
    if (offset == 0 || idx < 0 || idx >= static_cast<long>(sector.size())) continue;
    const Level& level = sector[static_cast<std::size_t>(idx)];
    const auto neighbour = eigenpair_for(spectrum, level);
    report.neighbors.push_back(
        {offset, level, localization_fraction(neighbour.components, n_components)});
  }
  return report;
}

Histogram dos_histogram(const Spectrum& spectrum, std::size_t bins, bool density) {
  if (bins < 8) throw DomainError("dos_histogram needs at least 8 bins");
  const double lo = spectrum.levels.front().energy;
  const double hi = spectrum.levels.back().energy;
  if (!(hi > lo)) throw DomainError("degenerate energy range");
  const double width = (hi - lo) / static_cast<double>(bins);

  Histogram h;
  h.density = density;
  h.bin_edges.resize(bins + 1);
  for (std::size_t i = 0; i < bins; ++i) h.bin_edges[i] = lo + static_cast<double>(i) * width;
  h.bin_edges[bins] = hi;
  h.counts.assign(bins, 0.0);
  for (const auto& level : spectrum.levels) {
    auto idx = static_cast<std::size_t>(std::floor((level.energy - lo) / width));
    h.counts[std::min(idx, bins - 1)] += 1.0;
  }
  if (density) {
    const double total = static_cast<double>(spectrum.size());
    for (double& c : h.counts) c /= total * width;
  }
  return h;
}

DoubletDecay doublet_decay_fit(double lambda, std::span<const int> ns) {
  if (!(lambda > 1.0)) throw DomainError("doublet decay requires lambda > 1");
  DoubletDecay out;
  std::vector<double> xs;
  std::vector<double> ys;
  for (int n : ns) {
    const auto spectrum = merged_spectrum(ModelParams(lambda, n));
    const auto pairs = doublet_splittings(spectrum, lambda);
    const bool usable = !pairs.empty() && !pairs.front().below_resolution &&
                        pairs.front().splitting > 0.0;
    out.ns.push_back(n);
    out.splittings.push_back(pairs.empty() ? std::numeric_limits<double>::quiet_NaN()
                                           : pairs.front().splitting);
    out.flagged.push_back(!usable);
    if (usable) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(pairs.front().splitting));
    }
  }
  if (xs.size() < 3) {
    throw InsufficientData("doublet decay fit needs 3 resolved splittings, got " +
                           std::to_string(xs.size()));
  }
  out.fit = fit_line(xs, ys);
  out.fit.amplitude = std::exp(out.fit.intercept);
  return out;
}

StaircaseDeviation staircase_deviation(const Spectrum& spectrum, Resolution res) {
  const auto& params = spectrum.params;
  const double lambda = params.coupling();
  const ActionFunction action(lambda, res);
  const double lo = k_min(lambda);
  const double hi = k_max(lambda);
  const double margin = 0.02 * (hi - lo);
  const auto kc = separatrix_energy(lambda);

  std::vector<double> deviations;
  for (const auto& level : spectrum.levels) {
    const double k = level.scaled_energy;
    if (k < lo + margin || k > hi - margin) continue;
    if (kc && std::abs(k - *kc) < 0.05) continue;
    const double smooth = counting_function(k, params, action);
    const double before = static_cast<double>(level.global_index);
    deviations.push_back(before - smooth);
    deviations.push_back(before + 1.0 - smooth);
  }
  if (deviations.empty()) return {0.0, 0, 0};

  const auto [mn, mx] = std::minmax_element(deviations.begin(), deviations.end());
  const double centre = 0.5 * (*mn + *mx);
  StaircaseDeviation best{std::numeric_limits<double>::infinity(), 0, deviations.size() / 2};
  for (double candidate : {std::floor(centre), std::ceil(centre)}) {
    double worst = 0.0;
    for (double d : deviations) worst = std::max(worst, std::abs(d - candidate));
    if (worst < best.max_deviation) {
      best.max_deviation = worst;
      best.offset = static_cast<int>(candidate);
    }
  }
  return best;
}

}  // namespace lmg
