#include "lmg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lmg/errors.hpp"

namespace lmg {

double j_plus_sq_element(double j, double m) {
  const double a = j - m;
  const double b = j + m + 1.0;
  const double c = j - m - 1.0;
  const double d = j + m + 2.0;
  if (a <= 0.0 || b <= 0.0 || c <= 0.0 || d <= 0.0) return 0.0;
  return std::sqrt(a * b * c * d);
}

TridiagonalSector build_sector(const ModelParams& params, Parity parity) {
  TridiagonalSector sector{sector_basis(params, parity), {}};
  const double j = params.spin();
  const double coupling = params.coupling() / (2.0 * params.n_particles());
  const std::size_t dim = sector.basis.size();
  auto& mat = sector.matrix;
  mat.diag.resize(dim);
  mat.offdiag.resize(dim - 1);
  for (std::size_t i = 0; i < dim; ++i) {
    const double m = sector.basis.m(i);
    mat.diag[i] = m;
    if (i + 1 < dim) mat.offdiag[i] = coupling * j_plus_sq_element(j, m);
  }
  return sector;
}

std::vector<double> eigen_all(const TridiagonalSector& sector, unsigned workers) {
  return eigenvalues(sector.matrix, workers);
}

TridiagonalEigenpair eigen_k(const TridiagonalSector& sector, std::size_t k) {
  return eigenpair(sector.matrix, k);
}

std::vector<Level> Spectrum::sector(Parity parity) const {
  std::vector<Level> out;
  for (const auto& level : levels) {
    if (level.parity == parity) out.push_back(level);
  }
  std::sort(out.begin(), out.end(),
            [](const Level& a, const Level& b) { return a.sector_index < b.sector_index; });
  return out;
}

double Spectrum::spectral_radius() const {
  double r = 0.0;
  for (const auto& level : levels) r = std::max(r, std::abs(level.energy));
  return r;
}

namespace {

bool level_order(const Level& a, const Level& b) {
  if (a.energy != b.energy) return a.energy < b.energy;
  if (a.parity != b.parity) return a.parity == Parity::even;
  return a.sector_index < b.sector_index;
}

}  // namespace

Spectrum merged_spectrum(const ModelParams& params, unsigned workers) {
  Spectrum spectrum{params, {}};
  spectrum.levels.reserve(static_cast<std::size_t>(params.n_particles()) + 1);
  for (Parity parity : {Parity::even, Parity::odd}) {
    const auto values = eigen_all(build_sector(params, parity), workers);
    for (std::size_t i = 0; i < values.size(); ++i) {
      spectrum.levels.push_back({values[i], params.scaled(values[i]), parity, i, 0});
    }
  }
  std::sort(spectrum.levels.begin(), spectrum.levels.end(), level_order);
  for (std::size_t i = 0; i < spectrum.levels.size(); ++i) spectrum.levels[i].global_index = i;
  return spectrum;
}

Eigenpair eigenpair_for(const Spectrum& spectrum, const Level& level) {
  const auto sector = build_sector(spectrum.params, level.parity);
  if (level.sector_index >= sector.size()) {
    throw IndexError("sector index " + std::to_string(level.sector_index) + " out of range");
  }
  return {level, inverse_iteration(sector.matrix, level.energy)};
}

double gap(const ModelParams& params) {
  std::vector<double> lowest;
  for (Parity parity : {Parity::even, Parity::odd}) {
    const auto sector = build_sector(params, parity);
    const auto values = eigenvalues(sector.matrix, 0, std::min<std::size_t>(2, sector.size()));
    lowest.insert(lowest.end(), values.begin(), values.end());
  }
  std::sort(lowest.begin(), lowest.end());
  return lowest[1] - lowest[0];
}

std::vector<DoubletSplitting> doublet_splittings(const Spectrum& spectrum, double lambda) {
  std::vector<DoubletSplitting> out;
  if (!(lambda > 1.0)) return out;

  const double resolution = 1e-13 * spectrum.spectral_radius();
  const auto& levels = spectrum.levels;
  for (std::size_t i = 0; i + 1 < levels.size(); i += 2) {
    const Level& a = levels[i];
    const Level& b = levels[i + 1];
    const double mean_k = 0.5 * (a.scaled_energy + b.scaled_energy);
    if (!(mean_k < -1.0)) break;
    if (a.parity == b.parity) {
      throw PairingError("levels " + std::to_string(i) + " and " + std::to_string(i + 1) +
                         " below the separatrix share parity " + std::string(to_string(a.parity)));
    }
    const double split = std::abs(a.energy - b.energy);
    out.push_back({i / 2, 0.5 * (a.energy + b.energy), split, split < resolution});
  }
  return out;
}

}  // namespace lmg
