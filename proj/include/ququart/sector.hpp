#pragma once

#include "ququart/mappings.hpp"

#include <array>
#include <vector>

namespace ququart {

/// Per-qudit levels of the product state on which every vertex operator is
/// +1 (no fermions). Qudits that carry no vertex operator sit at level 0.
std::vector<int> vacuum_levels(const Mapping& m);

/// Arbitration between the two sector conventions (I ± G)/2. On a 2×2 open
/// lattice the projected vacuum is loaded with fermion pairs and the moments
/// ⟨H^k⟩, k = 1..8, are compared with the Fock-space oracle for both signs.
struct SectorCalibration {
  MappingKind kind = MappingKind::SpinlessLocal;
  int sign = 1;
  // worst relative moment mismatch for s = +1 and s = −1
  std::array<double, 2> moment_error{};
  std::array<double, 2> survival{};
};

/// Throws std::logic_error if neither or both signs reproduce the oracle.
SectorCalibration calibrate_sector(MappingKind kind);

/// Cached result of calibrate_sector(kind).sign; +1 for kinds without constraints.
int physical_sector_sign(MappingKind kind);

}  // namespace ququart
