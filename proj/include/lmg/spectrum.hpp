#pragma once

#include <cstddef>
#include <vector>

#include "lmg/model.hpp"
#include "lmg/tridiagonal.hpp"

namespace lmg {

/// sqrt((j-m)(j+m+1)(j-m-1)(j+m+2)), the <m+2| J_+^2 |m> matrix element.
/// Returns 0 when the ladder runs off the top of the multiplet.
double j_plus_sq_element(double j, double m);

/// H restricted to one parity sector of the J_z basis.
struct TridiagonalSector {
  SectorBasis basis;
  SymmetricTridiagonal matrix;  // diag[i] = m_i, offdiag[i] = <m_i+2|H|m_i>

  Parity parity() const noexcept { return basis.parity; }
  std::size_t size() const noexcept { return matrix.size(); }
};

TridiagonalSector build_sector(const ModelParams& params, Parity parity);

struct Level {
  double energy;         // units of H
  double scaled_energy;  // K = 2E/N
  Parity parity;
  std::size_t sector_index;
  std::size_t global_index;
};

struct Eigenpair {
  Level level;
  std::vector<double> components;  // sector basis, ascending m
};

/// Merged spectrum of both parity sectors, ascending; ties put even first.
struct Spectrum {
  ModelParams params;
  std::vector<Level> levels;

  std::size_t size() const noexcept { return levels.size(); }
  const Level& ground() const { return levels.front(); }
  /// Levels of one sector in sector_index order.
  std::vector<Level> sector(Parity parity) const;
  /// Largest |E|, the scale used for resolution thresholds.
  double spectral_radius() const;
};

std::vector<double> eigen_all(const TridiagonalSector& sector, unsigned workers = 1);

/// k-th eigenpair of a sector; energies and components only, no global index.
TridiagonalEigenpair eigen_k(const TridiagonalSector& sector, std::size_t k);

Spectrum merged_spectrum(const ModelParams& params, unsigned workers = 1);

/// Eigenpair for a level of `spectrum` (recomputes the sector vector).
Eigenpair eigenpair_for(const Spectrum& spectrum, const Level& level);

/// E_1 - E_0 of the merged spectrum. Only the two lowest levels of each sector
/// are computed.
double gap(const ModelParams& params);

struct DoubletSplitting {
  std::size_t pair_index;
  double mean_energy;
  double splitting;
  bool below_resolution;  // splitting < 1e-13 * spectral radius; value is noise
};

/// Even/odd doublets below the separatrix (mean K < -1). Empty for lambda <= 1.
/// Throws PairingError if the parities of consecutive levels do not alternate.
std::vector<DoubletSplitting> doublet_splittings(const Spectrum& spectrum, double lambda);

}  // namespace lmg
