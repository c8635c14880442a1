#pragma once

#include "ququart/gamma.hpp"
#include "ququart/lattice.hpp"
#include "ququart/mappings.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ququart {

// Fock-space reference. Modes are numbered spin-up sites first (row-major),
// then spin-down sites; occupation of mode i is bit i of the state word. The
// Jordan-Wigner sign of c†_i is (−1)^(number of occupied modes below i).

inline constexpr int kMaxFermionModes = 16;

int fermion_mode(const LatticeSpec& spec, Site s, std::optional<Spin> spin = {});

class FockBasis {
 public:
  using Word = std::uint32_t;

  static FockBasis full(int n_modes);
  /// States with exactly n_up spin-up and n_down spin-down particles. For a
  /// spinless lattice pass n_down = 0 and spinful = false.
  static FockBasis with_numbers(int n_sites, bool spinful, int n_up, int n_down);

  int n_modes() const { return n_modes_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(states_.size()); }
  const std::vector<Word>& states() const { return states_; }
  Word state(Eigen::Index i) const { return states_[static_cast<std::size_t>(i)]; }
  std::optional<Eigen::Index> index_of(Word w) const;

 private:
  FockBasis(int n_modes, std::vector<Word> states);
  int n_modes_ = 0;
  std::vector<Word> states_;  // sorted ascending
};

/// c†_mode on the full Fock space of n_modes modes.
SparseMatrixc creation_matrix(int n_modes, int mode);
SparseMatrixc number_matrix(int n_modes, int mode);

/// Rows and columns of a full-space operator restricted to a basis.
SparseMatrixc restrict_to(const SparseMatrixc& full, const FockBasis& basis);

struct FermionHamiltonian {
  LatticeSpec spec;
  bool spinful = false;
  FockBasis basis;
  SparseMatrixc matrix;
};

/// −T Σ_edges (f†f + h.c.) + V Σ_edges n n, or the Fermi-Hubbard form
/// −J Σ_edges,σ (f†f + h.c.) + U Σ_sites n↑ n↓, on the given basis (full Fock
/// space when omitted). Throws std::length_error above kMaxFermionModes.
FermionHamiltonian build_fermion_hamiltonian(const LatticeSpec& spec, const ModelParams& params,
                                             const std::optional<FockBasis>& basis = {});

/// e^{−iHt} through a dense Hermitian eigendecomposition.
class ExactPropagator {
 public:
  explicit ExactPropagator(const FermionHamiltonian& h);

  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  /// Throws std::invalid_argument if psi0 is not normalized to 1e-10.
  VectorXc evolve(const VectorXc& psi0, double t) const;

 private:
  Eigen::VectorXd lambda_;
  MatrixXc vectors_;
};

VectorXc exact_evolve(const FermionHamiltonian& h, const VectorXc& psi0, double t);

/// ⟨n_mode⟩ for a state expressed in `basis`.
double occupation(const FockBasis& basis, const VectorXc& psi, int mode);
std::vector<double> occupations(const FockBasis& basis, const VectorXc& psi);

struct FockState {
  FockBasis basis;
  VectorXc amplitudes;
};

/// "tV_2x3" or "FH_2x3"; each is an equal-weight superposition of two
/// occupation patterns written as ascending products of creation operators.
/// Throws std::invalid_argument for other names.
FockState reference_initial_state(const std::string& name);

/// Re-expresses a state in a smaller basis; throws if weight would be lost.
VectorXc project_onto(const FockState& state, const FockBasis& basis);

}  // namespace ququart
