#pragma once

#include "ququart/fermion_oracle.hpp"
#include "ququart/mappings.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ququart {

/// An even fermionic operator on one bond, realisable under every mapping.
struct FermionOp {
  enum class Kind { PairCreation, Hopping };
  Kind kind = Kind::PairCreation;
  Site i;
  Site j;
  std::optional<Spin> spin;
};

/// Σ_k c_k O_k, with O_k = identity when the operator slot is empty.
struct RecipeFactor {
  std::vector<std::pair<Complex, std::optional<FermionOp>>> terms;
};

/// Operators applied to the vacuum in order (first factor acts first); the
/// result is normalised afterwards.
struct StateRecipe {
  std::string name;
  LatticeSpec spec;
  bool spinful = false;
  std::vector<RecipeFactor> factors;
};

/// "tv_2x3": (1/√2)(I + hop(1,2)) f†_0 f†_1.
/// "fh_2x3": (1/√2)(I + hop↑(1,4)) f†_0↑ f†_1↑ f†_0↓ f†_1↓.
/// Throws std::invalid_argument for unknown names.
StateRecipe preset_recipe(const std::string& name);

/// f†_i f†_j, or f†_i f_j + f†_j f_i, on the full Fock space.
SparseMatrixc fock_operator(const LatticeSpec& spec, bool spinful, const FermionOp& op);

/// The same operator under a mapping.
OperatorSum qudit_operator(const Mapping& m, const FermionOp& op);

/// Recipe applied to the Fock vacuum. Throws std::runtime_error when the
/// result vanishes.
FockState apply_recipe(const StateRecipe& recipe);

/// The particle numbers (n_up, n_down) shared by every component of a state.
/// Throws std::invalid_argument when the state mixes number sectors.
std::pair<int, int> particle_numbers(const FockState& state, int n_sites);

}  // namespace ququart
