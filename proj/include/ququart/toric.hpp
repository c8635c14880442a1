#pragma once

#include "ququart/mappings.hpp"
#include "ququart/statevector.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ququart {

enum class Pauli : std::uint8_t { I, X, Y, Z };

char to_char(Pauli p);
/// 2×2 matrix of a Pauli.
Eigen::Matrix2cd pauli_matrix(Pauli p);

/// Qubit `slot` (1 or 2) of a ququart. Slot 1 is the leading tensor factor of
/// the Γ representation, so Γ1 = σx⊗I, Γ3 = σz⊗σx and Γ̃ = σz⊗σz.
struct QubitRef {
  int qudit = 0;
  int slot = 1;

  int index() const { return 2 * qudit + (slot - 1); }
  static QubitRef from_index(int q) { return {q / 2, q % 2 + 1}; }
  friend constexpr auto operator<=>(const QubitRef&, const QubitRef&) = default;
};

/// A site factor written as phase · (slot-1 Pauli) ⊗ (slot-2 Pauli).
struct PauliPair {
  Complex phase{1.0, 0.0};
  Pauli first = Pauli::I;
  Pauli second = Pauli::I;
};

/// Exact; every canonical Γ word is a phased Pauli pair.
PauliPair pauli_pair(SiteFactor f);

/// Phase times a Pauli word over qubits (qudit, slot). Identities are not
/// stored; entries are sorted by qubit index.
class StabilizerOperator {
 public:
  using Entry = std::pair<int, Pauli>;  // qubit index, Pauli

  StabilizerOperator() = default;
  explicit StabilizerOperator(Complex phase) : phase_(phase) {}
  StabilizerOperator(Complex phase, std::vector<std::pair<QubitRef, Pauli>> word);

  static StabilizerOperator from_monomial(const QuditMonomial& m);

  Complex phase() const { return phase_; }
  std::span<const Entry> entries() const { return entries_; }
  Pauli at(QubitRef q) const;
  /// Restriction to one slot, phase dropped.
  StabilizerOperator slot_part(int slot) const;

  bool is_hermitian() const;
  bool commutes_with(const StabilizerOperator& o) const;
  StabilizerOperator adjoint() const;

  /// Dense 4^n matrix, qudit 0 most significant.
  MatrixXc to_dense(int n_qudits, int cap = 6) const;
  SparseMatrixc to_sparse(int n_qudits) const;
  /// Written as σ^{y,1}_(0,0) σ^{z,2}_(1,1) with site coordinates from spec.
  std::string to_string(const LatticeSpec& spec) const;

  friend StabilizerOperator operator*(const StabilizerOperator& a, const StabilizerOperator& b);
  friend bool operator==(const StabilizerOperator& a, const StabilizerOperator& b);

 private:
  friend class QubitCircuit;
  Complex phase_{1.0, 0.0};
  std::vector<Entry> entries_;
};

/// One- or two-qubit Clifford gate placed on qubits of the register.
struct QubitGate {
  std::string name;
  std::vector<QubitRef> qubits;  // control first for CNOT
  MatrixXc matrix;               // 2×2 or 4×4, qubits[0] most significant
};

/// Gates in application order.
class QubitCircuit {
 public:
  QubitCircuit() = default;
  explicit QubitCircuit(std::vector<QubitGate> gates) : gates_(std::move(gates)) {}

  std::span<const QubitGate> gates() const { return gates_; }
  void append(const QubitGate& g) { gates_.push_back(g); }
  void append(const QubitCircuit& c);

  /// U·P·U† gate by gate. Throws std::domain_error if a gate maps a Pauli word
  /// outside the Pauli group.
  StabilizerOperator conjugate(const StabilizerOperator& p) const;
  SparseMatrixc to_sparse(int n_qudits) const;
  int two_qubit_count() const;

 private:
  std::vector<QubitGate> gates_;
};

/// H, S, R = (I + iσx)/√2, its true adjoint R†, CZ and CNOT (control first).
struct ToricGateSet {
  Eigen::Matrix2cd h;
  Eigen::Matrix2cd s;
  Eigen::Matrix2cd r;
  Eigen::Matrix2cd r_dagger;
  Eigen::Matrix4cd cz;
  Eigen::Matrix4cd cnot;
};
const ToricGateSet& toric_gate_set();

/// Named gate from the set: "H", "S", "R", "Rdg", "CZ", "CNOT".
QubitGate make_gate(const std::string& name, std::vector<QubitRef> qubits);

/// CNOT from slot 1 to slot 2 on every ququart.
QubitCircuit cnot_layer(int n_qudits);

/// CNOT_12 on every site applied to the plaquette constraint of p. Throws
/// std::invalid_argument unless m is SpinlessLocal.
StabilizerOperator cnot_conjugate(const Mapping& m, const Plaquette& p);

/// Per-site gate assignment for V2..V6; layers apply in the listed order.
struct GatePlacement {
  std::string gate;
  Site site;
  int slot = 1;
  std::optional<Site> target_site;  // two-qubit gates
  int target_slot = 1;
};
struct VvcLayer {
  std::string name;
  std::vector<GatePlacement> gates;
};
struct VvcLayout {
  std::vector<VvcLayer> layers;
};

/// Default assignment. Layers V2..V4 rotate the auxiliary slot so the
/// conjugated plaquettes alternate between pure σx and pure σz words on a
/// checkerboard (R on even sites, H then S on odd sites). V5 is empty and V6
/// places CZ between the physical slots of vertical neighbours, the axis
/// swapped with respect to the horizontal physical pair carried by each
/// plaquette.
VvcLayout default_vvc_layout(const LatticeSpec& spec);

inline constexpr int kToricDenseCap = 6;

/// V^VC = V6·V5·V4·V3·V2 as a circuit. Throws std::invalid_argument for a
/// non-spinless mapping, a layout naming an unknown gate or an off-lattice
/// site, or more than kToricDenseCap ququarts.
QubitCircuit build_vvc(const Mapping& m, const VvcLayout& layout);

/// Vacuum projected onto the constraint sector, with the audit data.
struct VacuumCertificate {
  QuditState state;
  std::vector<std::string> labels;
  std::vector<double> expectations;
  std::vector<int> sector_signs;
  std::vector<double> occupations;
  double survival_probability = 0.0;
  double energy = 0.0;
  double max_constraint_error = 0.0;
};

/// Throws std::invalid_argument for kinds other than SpinlessLocal and
/// SpinSplit, std::runtime_error if the projection annihilates the state.
VacuumCertificate vacuum_prepare(const MappedModel& model,
                                 std::size_t budget = kDefaultMemoryBudget);

}  // namespace ququart
