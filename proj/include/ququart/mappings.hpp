#pragma once

#include "ququart/gamma.hpp"
#include "ququart/lattice.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ququart {

enum class MappingKind { SpinlessLocal, SpinSplit, AuxiliaryParity, GeneralizedJW };
enum class Spin { Up, Down };
enum class Layer { Physical, Primed };

std::string_view to_string(MappingKind kind);
std::string_view to_string(Spin spin);
/// Accepts "spinless", "spin_split", "auxiliary_parity", "generalized_jw".
std::optional<MappingKind> parse_mapping_kind(std::string_view name);

bool is_spinful(MappingKind kind);
bool has_constraints(MappingKind kind);

/// Physical layer first, then the primed layer, both row-major.
class QuditLayout {
 public:
  QuditLayout() = default;
  QuditLayout(const LatticeSpec& spec, int layers);
  static QuditLayout for_kind(MappingKind kind, const LatticeSpec& spec);

  int n_qudits() const { return spec_.n_sites() * layers_; }
  int layers() const { return layers_; }
  const LatticeSpec& spec() const { return spec_; }
  /// Throws std::out_of_range for an off-lattice site or a missing layer.
  int qudit(Site s, Layer layer = Layer::Physical) const;

 private:
  LatticeSpec spec_;
  int layers_ = 1;
};

/// Lattice plus mapping kind; the handle every operator constructor takes.
class Mapping {
 public:
  Mapping(MappingKind kind, const LatticeSpec& spec);

  MappingKind kind() const { return kind_; }
  const LatticeSpec& spec() const { return layout_.spec(); }
  const QuditLayout& layout() const { return layout_; }
  std::vector<std::optional<Spin>> spins() const;

  /// Throws std::invalid_argument when the spin argument does not fit the kind.
  void check_spin(std::optional<Spin> spin) const;

 private:
  MappingKind kind_;
  QuditLayout layout_;
};

/// A_ij for an oriented edge. Reversed edges give −A.
QuditMonomial edge_operator(const Mapping& m, const Edge& e, std::optional<Spin> spin = {});
/// B_r, Hermitian and involutory.
QuditMonomial vertex_operator(const Mapping& m, Site s, std::optional<Spin> spin = {});

/// S_ij + S_ji = i·A_ij (B_i − B_j), which is 2·(f†_i f_j + f†_j f_i).
OperatorSum hopping_sum(const Mapping& m, const Edge& e, std::optional<Spin> spin = {});
/// f†_i f†_j = (i/4)·A_ij (I + B_i)(I + B_j) with i = e.from, j = e.to.
OperatorSum pair_creation(const Mapping& m, const Edge& e, std::optional<Spin> spin = {});
/// n_r = (I − B_r)/2.
OperatorSum number_operator(const Mapping& m, Site s, std::optional<Spin> spin = {});

/// i^L times the ordered product of edge operators around a closed loop.
QuditMonomial loop_operator(const Mapping& m, std::span<const Edge> loop,
                            std::optional<Spin> spin = {});
QuditMonomial plaquette_constraint(const Mapping& m, const Plaquette& p,
                                   std::optional<Spin> spin = {});
/// Throws std::invalid_argument on open lattices.
QuditMonomial polyakov_constraint(const Mapping& m, const PolyakovLoop& loop,
                                  std::optional<Spin> spin = {});

/// Majorana pair of a mode under the qudit Jordan-Wigner construction:
/// γ = S_m Γ1_m, γ' = −S_m Γ2_m for spin up (Γ3, Γ4 for spin down), with S_m
/// the Γ̃ string over all earlier sites in enumerate_sites order.
struct MajoranaPair {
  QuditMonomial gamma;
  QuditMonomial gamma_prime;
};
MajoranaPair jwt_majoranas(const LatticeSpec& spec, int site_index, Spin spin);

struct LadderPair {
  OperatorSum creation;
  OperatorSum annihilation;
};
/// f† = ½ ∏_{k<m} Γ̃_k (Γ1_m + iΓ2_m) and its adjoint (Γ3, Γ4 for spin down).
LadderPair jwt_operators(const LatticeSpec& spec, int site_index, Spin spin);

struct TVModel {
  double t = 1.0;
  double v = 0.0;
};
struct HubbardModel {
  double j = 1.0;
  double u = 0.0;
};
using ModelParams = std::variant<TVModel, HubbardModel>;

enum class TermType { HopX, HopY, Interaction };

/// One Hamiltonian term with the lattice metadata the Trotter grouping needs.
struct HamiltonianTerm {
  TermType type = TermType::HopX;
  int parity_class = 0;             // hopping only
  std::optional<Spin> spin;         // hopping only
  std::optional<Edge> edge;         // hopping and t-V interaction
  std::optional<Site> site;         // on-site interaction
  OperatorSum op;
};

struct MappedModel {
  LatticeSpec spec;
  MappingKind kind = MappingKind::SpinlessLocal;
  QuditLayout layout;
  ModelParams params;
  OperatorSum hamiltonian;
  std::vector<HamiltonianTerm> terms;
  std::vector<OperatorSum> constraints;
  std::vector<std::string> constraint_labels;
  /// Physical sector: (I + s_p G_p)/2 projects onto it.
  std::vector<int> sector_signs;

  Mapping mapping() const { return Mapping(kind, spec); }
  int n_qudits() const { return layout.n_qudits(); }
};

/// Throws std::invalid_argument for an incompatible model/kind pair. Sector
/// signs come from physical_sector_sign().
MappedModel build_hamiltonian(MappingKind kind, const LatticeSpec& spec, const ModelParams& params);
/// Same, with every sector sign set to `sign`.
MappedModel build_hamiltonian(MappingKind kind, const LatticeSpec& spec, const ModelParams& params,
                              int sign);

/// Plaquette constraints for every spin, then Polyakov loops on periodic
/// lattices. Empty for GeneralizedJW.
std::vector<QuditMonomial> constraint_generators(const Mapping& m,
                                                 std::vector<std::string>* labels = nullptr);

/// Every A on forward edges and every B, tagged with the fermionic modes they
/// touch. Mode = site_index * 2 + spin (spin 0 when spinless).
struct TaggedOperator {
  std::string name;
  std::vector<int> modes;
  QuditMonomial op;
};
std::vector<TaggedOperator> rule_table_operators(const Mapping& m);

/// Hermitian monomials that commute with every A and B and with each other,
/// chosen to include the given constraints. Together with the constraints they
/// fix a sector on which the edge/vertex algebra acts irreducibly. Intended
/// for small lattices (up to about 8 qudits).
std::vector<QuditMonomial> residual_symmetries(const Mapping& m,
                                               std::span<const QuditMonomial> constraints);

}  // namespace ququart
