#pragma once

#include "ququart/mappings.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ququart {

struct ValidationOptions {
  double tol = 1e-12;
  double constraint_tol = 1e-10;
  bool constraints = true;
  /// Test hook: corrupt the k-th edge operator (Γ1 ↔ Γ3 on its first factor)
  /// so the suite has something to catch.
  std::optional<int> fault_edge;
};

/// Counts and first failures of the mapping property suite. Every relation is
/// decided symbolically and confirmed with sparse matrices on the union of
/// the supports involved.
struct ValidationReport {
  MappingKind kind = MappingKind::SpinlessLocal;
  LatticeSpec spec;
  int rule_pairs = 0;      // (anti)commutation of A/B pairs, cross-spin included
  int cross_spin = 0;
  int antisymmetry = 0;
  int involution = 0;      // Hermitian and squaring to I: A, B, G
  int constraint_pairs = 0;
  int constraint_hamiltonian = 0;
  double max_error = 0.0;
  std::vector<std::string> failures;

  int total() const {
    return rule_pairs + antisymmetry + involution + constraint_pairs + constraint_hamiltonian;
  }
  bool passed() const { return failures.empty(); }
};

/// Hamiltonian used for [G, H]: t-V (T = 1, V = 0.5) for the spinless
/// mapping, Hubbard (J = 1, U = 0.5) otherwise.
ValidationReport validate_mapping(const Mapping& m, const ValidationOptions& options = {});

/// ‖a·b − sign·b·a‖_max with both operators expanded on their joint support.
double relation_error(const OperatorSum& a, const OperatorSum& b, int sign);

}  // namespace ququart
