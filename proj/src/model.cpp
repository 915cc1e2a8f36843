#include "lmg/model.hpp"

#include <cmath>
#include <string>

#include "lmg/errors.hpp"

namespace lmg {

ModelParams::ModelParams(double coupling, int n_particles) : coupling_(coupling), n_(n_particles) {
  if (n_particles < 1) {
    throw InvalidParams("n_particles must be >= 1, got " + std::to_string(n_particles));
  }
  if (!std::isfinite(coupling) || coupling < 0.0) {
    throw InvalidParams("coupling must be finite and >= 0, got " + std::to_string(coupling));
  }
}

std::string_view to_string(Parity p) noexcept { return p == Parity::even ? "even" : "odd"; }

SectorBasis sector_basis(const ModelParams& params, Parity parity) {
  SectorBasis basis{parity, {}};
  const int two_j = params.two_j();
  basis.two_m.reserve(static_cast<std::size_t>(two_j / 2 + 1));
  for (int two_m = -two_j + 2 * static_cast<int>(parity); two_m <= two_j; two_m += 4) {
    basis.two_m.push_back(two_m);
  }
  return basis;
}

}  // namespace lmg
