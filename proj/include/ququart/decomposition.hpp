#pragma once

#include "ququart/mappings.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ququart {

/// u·a·u† = d. For the Trotter use a = u†·d·u, so e^{a⊗B} = u†·e^{d⊗B}·u.
struct ConjugationSolution {
  MatrixXc u;
  MatrixXc a;
  MatrixXc d;
};

/// Eigenbases of a and d are paired in descending eigenvalue order. Inside a
/// degenerate eigenspace the basis is Gram-Schmidt (QR) of the projector
/// columns, taken left to right, each vector phased so its first nonzero
/// entry is real and positive; the result depends only on the eigenspaces.
/// Throws std::invalid_argument when a or d is not Hermitian or the spectra
/// differ by more than 1e-9.
ConjugationSolution solve_conjugation(const MatrixXc& a, const MatrixXc& d);

/// f(H) for Hermitian H through its eigendecomposition, f(λ) = exp(c·λ).
MatrixXc hermitian_exp(const MatrixXc& h, Complex c);

/// One gate of a circuit template. Rotations are e^{−iθ·scale·generator};
/// fixed gates apply `matrix` as is. qudits[0] is the most significant digit.
struct Gate {
  std::string name;
  std::vector<int> qudits;
  MatrixXc matrix;
  bool rotation = false;
  double scale = 1.0;

  MatrixXc unitary(double theta) const;
};

/// Gates in application order plus the identity part of the term, which only
/// contributes the global phase e^{−iθ·phase_rate}.
struct Circuit {
  std::string label;
  std::vector<Gate> gates;
  double phase_rate = 0.0;

  std::vector<int> support() const;
  int two_qudit_count() const;
  /// ASAP layering of the two-qudit gates; single-qudit gates are free.
  int two_qudit_depth() const;
  /// Product of all gates on the listed qudits (support[0] most significant).
  MatrixXc unitary(double theta, std::span<const int> support) const;
};

/// Circuit for e^{−iθ·term}. Pairwise commuting monomials of weight ≤ 2 become
/// one gate each. Otherwise the term is split as a⊗b with b the factor common
/// to every monomial; a (two qudits) is conjugated onto Γ̃⊗I + I⊗Γ̃, a
/// two-qudit b onto Γ̃⊗I, and the remaining diagonal exponentials are
/// two-qudit rotations. Throws std::invalid_argument if neither form applies.
Circuit decompose_term(const OperatorSum& term, const std::string& label = {});

enum class TemplateTerm { HopX, HopY, Interaction };
std::string_view to_string(TemplateTerm t);

/// Representative terms on a 2×2 open lattice with unit couplings:
/// hopping on the edges leaving site (0,0), interaction on the edge
/// (0,0)-(1,0) (t-V) or on site (0,0) (Hubbard).
OperatorSum template_term(MappingKind kind, TemplateTerm term, std::optional<Spin> spin = {});

/// Throws std::invalid_argument for GeneralizedJW, whose hopping is not local.
Circuit circuit_template(MappingKind kind, TemplateTerm term, std::optional<Spin> spin = {});

struct TemplateCount {
  std::string label;
  int two_qudit = 0;
  int depth = 0;
};

struct GateCountReport {
  MappingKind kind = MappingKind::SpinlessLocal;
  int hop_x = 0;
  int hop_y = 0;
  int interaction = 0;
  int total = 0;
  /// Two-qudit depth of hop_x, hop_y (all spins) and the interaction, ASAP.
  int depth = 0;
  std::vector<TemplateCount> templates;
};

GateCountReport gate_count(MappingKind kind);

/// One row of the operator-weight comparison. Weights of −1 mean "not
/// applicable"; `scaling` annotates a weight that grows with the lattice.
struct WeightRow {
  std::string method;
  int d = 4;
  std::string ratio;
  int w_x = 0;
  int w_y = 0;
  int w_int = 0;
  int w_g = -1;
  std::string w_y_scaling;
  bool reference_only = false;  // literature row, not computed here
};

/// Computed rows for the four implemented mappings on an lx × ly open lattice
/// (default 3×3), then the qubit Jordan-Wigner and BVC reference rows.
std::vector<WeightRow> weight_table(int lx = 3, int ly = 3);

/// Maximum monomial weight over the hopping terms of one orientation.
int hopping_weight(MappingKind kind, const LatticeSpec& spec, Orientation o);

std::string gate_count_markdown(const std::vector<GateCountReport>& reports);
std::string gate_count_csv(const std::vector<GateCountReport>& reports);
std::string weight_table_markdown(const std::vector<WeightRow>& rows);
std::string weight_table_csv(const std::vector<WeightRow>& rows);

}  // namespace ququart
