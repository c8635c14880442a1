#include "ququart/toric.hpp"
#include "ququart/trotter.hpp"

#include "../support/oracle.hpp"

#include <gtest/gtest.h>

using namespace ququart;

namespace {

using P = Pauli;

const LatticeSpec k2x2{2, 2, Boundary::Open};
const LatticeSpec k3x2{3, 2, Boundary::Open};

double max_abs(const MatrixXc& m) { return m.cwiseAbs().maxCoeff(); }

MatrixXc p2(char a, char b) { return oracle::kron(oracle::pauli(a), oracle::pauli(b)); }

MatrixXc cnot() {
  MatrixXc m = MatrixXc::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

// Expected Wen form for the plaquette with corner r.
StabilizerOperator wen_form(const Mapping& m, const Plaquette& p) {
  auto q = [&](int k) { return m.layout().qudit(p.sites[static_cast<std::size_t>(k)]); };
  return StabilizerOperator(1.0, {{{q(0), 1}, P::Y}, {{q(1), 1}, P::X}, {{q(2), 1}, P::Y},
                                  {{q(3), 1}, P::X}, {{q(2), 2}, P::Z}, {{q(3), 2}, P::Z}});
}

}  // namespace

TEST(Toric, GateSetMatrices) {
  const auto& g = toric_gate_set();
  const double r = std::sqrt(0.5);
  Eigen::Matrix2cd h, s, rr;
  h << r, r, r, -r;
  s << 1, 0, 0, kI;
  rr << r, kI * r, kI * r, r;
  EXPECT_LT((g.h - h).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ((g.s - s).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LT((g.r - rr).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((g.r * g.r_dagger - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
  cz(3, 3) = -1;
  EXPECT_EQ((g.cz - cz).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((MatrixXc(g.cnot) - cnot()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Toric, PrintedRDaggerIsNotTheAdjoint) {
  // the printed R† is −R; R times it gives −R² = −iσx, not ±I
  const auto& g = toric_gate_set();
  const Eigen::Matrix2cd printed = -g.r;
  const Eigen::Matrix2cd prod = g.r * printed;
  EXPECT_LT((MatrixXc(prod) - (-kI) * oracle::pauli('x')).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_GT((prod - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 0.5);
  EXPECT_GT((prod + Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 0.5);
}

TEST(Toric, SiteFactorsArePauliPairs) {
  // −iΓ13 = −σy⊗σx, −iΓ23 = σx⊗σx, −iΓ42 = −σx⊗σy, −iΓ14 = −σy⊗σy
  const struct {
    int a, b;
    double sign;
    char p, q;
  } table[] = {{1, 3, -1, 'y', 'x'}, {2, 3, 1, 'x', 'x'}, {4, 2, -1, 'x', 'y'}, {1, 4, -1, 'y', 'y'}};
  for (const auto& t : table) {
    const MatrixXc lhs = -kI * oracle::gamma(t.a) * oracle::gamma(t.b);
    EXPECT_LT(max_abs(lhs - t.sign * p2(t.p, t.q)), 1e-15);
  }
  for (int mask = 0; mask < 16; ++mask) {
    const auto f = SiteFactor::from_mask(static_cast<std::uint8_t>(mask));
    const PauliPair pp = pauli_pair(f);
    const MatrixXc m = pp.phase * oracle::kron(MatrixXc(pauli_matrix(pp.first)), MatrixXc(pauli_matrix(pp.second)));
    EXPECT_LT(max_abs(m - MatrixXc(f.matrix())), 1e-15) << f.label();
  }
}

TEST(Toric, CnotSiteIdentities) {
  const MatrixXc u = cnot();
  EXPECT_LT(max_abs(u * p2('y', 'x') * u.adjoint() - p2('y', 'i')), 1e-15);
  EXPECT_LT(max_abs(u * p2('x', 'x') * u.adjoint() - p2('x', 'i')), 1e-15);
  EXPECT_LT(max_abs(u * p2('x', 'y') * u.adjoint() - p2('y', 'z')), 1e-15);
  EXPECT_LT(max_abs(u * p2('y', 'y') * u.adjoint() + p2('x', 'z')), 1e-15);
}

TEST(Toric, StabilizerAlgebraMatchesDense) {
  const StabilizerOperator a(1.0, {{{0, 1}, P::X}, {{1, 2}, P::Y}});
  const StabilizerOperator b(kI, {{{0, 1}, P::Z}, {{1, 2}, P::Y}, {{0, 2}, P::X}});
  const MatrixXc da = a.to_dense(2), db = b.to_dense(2);
  EXPECT_LT(max_abs((a * b).to_dense(2) - da * db), 1e-15);
  EXPECT_EQ(a.commutes_with(b), max_abs(da * db - db * da) < 1e-12);
  EXPECT_TRUE(a.is_hermitian());
  EXPECT_FALSE(b.is_hermitian());
  EXPECT_LT(max_abs(b.adjoint().to_dense(2) - db.adjoint()), 1e-15);
  EXPECT_EQ(b.at({0, 2}), P::X);
  EXPECT_EQ(b.at({1, 1}), P::I);
  EXPECT_EQ(b.slot_part(2).entries().size(), 2u);
  EXPECT_THROW(a.to_dense(7), std::invalid_argument);
  EXPECT_THROW(StabilizerOperator(1.0, {{{0, 3}, P::X}}), std::invalid_argument);
}

TEST(Toric, FromMonomialMatchesDense) {
  const Mapping m(MappingKind::SpinlessLocal, k2x2);
  for (const auto& e : all_edges(k2x2)) {
    const auto a = edge_operator(m, e);
    EXPECT_LT(max_abs(StabilizerOperator::from_monomial(a).to_dense(4) - to_dense(OperatorSum(a), 4)), 1e-15);
  }
}

TEST(Toric, CnotConjugateGivesWenForm) {
  for (const auto& spec : {k2x2, k3x2}) {
    const Mapping m(MappingKind::SpinlessLocal, spec);
    const int n = m.layout().n_qudits();
    const SparseMatrixc u = cnot_layer(n).to_sparse(n);
    for (const auto& p : plaquettes(spec)) {
      const StabilizerOperator w = cnot_conjugate(m, p);
      EXPECT_EQ(w, wen_form(m, p)) << w.to_string(spec);
      const SparseMatrixc g = to_sparse_on(OperatorSum(plaquette_constraint(m, p)), [&] {
        std::vector<int> all(static_cast<std::size_t>(n));
        std::iota(all.begin(), all.end(), 0);
        return all;
      }());
      const SparseMatrixc conj = u * g * SparseMatrixc(u.adjoint());
      EXPECT_LT(MatrixXc(conj - w.to_sparse(n)).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_TRUE(w.is_hermitian());
      EXPECT_TRUE((w * w) == StabilizerOperator(1.0));
      // the slot-1 word and the slot-2 Z pair each square to the identity
      const auto aux = w.slot_part(1), phys = w.slot_part(2);
      EXPECT_TRUE((aux * aux) == StabilizerOperator(1.0));
      EXPECT_TRUE((phys * phys) == StabilizerOperator(1.0));
    }
  }
  EXPECT_EQ(cnot_conjugate(Mapping(MappingKind::SpinlessLocal, k2x2), plaquettes(k2x2).front()).to_string(k2x2),
            "σ^{y,1}_(0,0) σ^{x,1}_(1,0) σ^{x,1}_(0,1) σ^{z,2}_(0,1) σ^{y,1}_(1,1) σ^{z,2}_(1,1)");
  EXPECT_THROW(cnot_conjugate(Mapping(MappingKind::SpinSplit, k2x2), plaquettes(k2x2).front()),
               std::invalid_argument);
}

TEST(Toric, CnotConjugatePreservesSpectrum) {
  const Mapping m(MappingKind::SpinlessLocal, k2x2);
  const auto p = plaquettes(k2x2).front();
  const auto a = oracle::sorted_eigenvalues(to_dense(OperatorSum(plaquette_constraint(m, p)), 4));
  const auto b = oracle::sorted_eigenvalues(cnot_conjugate(m, p).to_dense(4));
  EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Toric, SymbolicConjugationMatchesDense) {
  const Mapping m(MappingKind::SpinlessLocal, k3x2);
  const QubitCircuit v = build_vvc(m, default_vvc_layout(k3x2));
  const SparseMatrixc u = v.to_sparse(6);
  const SparseMatrixc ud = u.adjoint();
  EXPECT_LT(MatrixXc(u * ud - [] {
              SparseMatrixc id(4096, 4096);
              id.setIdentity();
              return id;
            }()).cwiseAbs().maxCoeff(),
            1e-12);
  for (const auto& e : all_edges(k3x2)) {
    const auto s = StabilizerOperator::from_monomial(edge_operator(m, e));
    EXPECT_LT(MatrixXc(u * s.to_sparse(6) * ud - v.conjugate(s).to_sparse(6)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Toric, NonCliffordGateIsRejected) {
  QubitGate t{"T", {{0, 1}}, MatrixXc::Identity(2, 2)};
  t.matrix(1, 1) = std::polar(1.0, M_PI / 4);
  const QubitCircuit c({t});
  EXPECT_THROW(c.conjugate(StabilizerOperator(1.0, {{{0, 1}, P::X}})), std::domain_error);
  EXPECT_NO_THROW(c.conjugate(StabilizerOperator(1.0, {{{0, 1}, P::Z}})));
}

TEST(Toric, DefaultLayoutProducesCheckerboardPlaquettes) {
  const Mapping m(MappingKind::SpinlessLocal, k3x2);
  const QubitCircuit v = build_vvc(m, default_vvc_layout(k3x2));
  for (const auto& p : plaquettes(k3x2)) {
    const auto geb = v.conjugate(cnot_conjugate(m, p));
    const bool even = (p.corner.x + p.corner.y) % 2 == 0;
    const auto aux = geb.slot_part(1);
    ASSERT_EQ(aux.entries().size(), 4u);
    for (const auto& [q, x] : aux.entries()) EXPECT_EQ(x, even ? P::Z : P::X);
    EXPECT_EQ(geb.slot_part(2).entries().size(), 2u);
  }
}

TEST(Toric, ConjugatedConstraintAlgebra) {
  const Mapping m(MappingKind::SpinlessLocal, k3x2);
  const auto model = build_hamiltonian(MappingKind::SpinlessLocal, k3x2, TVModel{1.0, 0.5});
  const QubitCircuit v = build_vvc(m, default_vvc_layout(k3x2));
  const QubitCircuit full = [&] {
    QubitCircuit c = cnot_layer(6);
    c.append(v);
    return c;
  }();
  const SparseMatrixc u = full.to_sparse(6);
  const SparseMatrixc h = u * to_sparse_on(model.hamiltonian, std::vector<int>{0, 1, 2, 3, 4, 5}) *
                          SparseMatrixc(u.adjoint());
  std::vector<StabilizerOperator> orig, conj;
  for (const auto& p : plaquettes(k3x2)) {
    orig.push_back(StabilizerOperator::from_monomial(plaquette_constraint(m, p)));
    conj.push_back(full.conjugate(orig.back()));
  }
  for (std::size_t a = 0; a < conj.size(); ++a) {
    EXPECT_TRUE(conj[a].is_hermitian());
    EXPECT_TRUE((conj[a] * conj[a]) == StabilizerOperator(1.0));
    const SparseMatrixc g = conj[a].to_sparse(6);
    EXPECT_LT(MatrixXc(g * h - h * g).cwiseAbs().maxCoeff(), 1e-12);
    for (std::size_t b = 0; b < conj.size(); ++b)
      EXPECT_EQ(conj[a].commutes_with(conj[b]), orig[a].commutes_with(orig[b]));
    // a Hermitian involution's spectrum is fixed by its trace
    const SparseMatrixc g0 = orig[a].to_sparse(6);
    Complex t0 = 0, t1 = 0;
    for (Eigen::Index k = 0; k < 4096; ++k) {
      t0 += g0.coeff(k, k);
      t1 += g.coeff(k, k);
    }
    EXPECT_LT(std::abs(t0 - t1), 1e-12);
  }
}

TEST(Toric, BuildVvcRejectsBadInput) {
  EXPECT_THROW(build_vvc(Mapping(MappingKind::SpinSplit, k2x2), default_vvc_layout(k2x2)), std::invalid_argument);
  const LatticeSpec big{3, 3, Boundary::Open};
  EXPECT_THROW(build_vvc(Mapping(MappingKind::SpinlessLocal, big), default_vvc_layout(big)), std::invalid_argument);
  VvcLayout bad{{{"V2", {{"T", {0, 0}, 1, std::nullopt, 1}}}}};
  EXPECT_THROW(build_vvc(Mapping(MappingKind::SpinlessLocal, k2x2), bad), std::invalid_argument);
  VvcLayout off{{{"V2", {{"H", {5, 0}, 1, std::nullopt, 1}}}}};
  EXPECT_THROW(build_vvc(Mapping(MappingKind::SpinlessLocal, k2x2), off), std::invalid_argument);
  EXPECT_THROW(make_gate("CZ", {{0, 1}}), std::invalid_argument);
  EXPECT_THROW(make_gate("CNOT", {{0, 1}, {0, 1}}), std::invalid_argument);
}

TEST(Toric, VacuumCertificate) {
  for (const auto& [kind, params] : {std::pair<MappingKind, ModelParams>{MappingKind::SpinlessLocal, TVModel{1.0, 0.5}},
                                     std::pair<MappingKind, ModelParams>{MappingKind::SpinSplit, HubbardModel{1.0, 0.5}}}) {
    const auto model = build_hamiltonian(kind, k2x2, params);
    const auto cert = vacuum_prepare(model);
    EXPECT_LT(cert.max_constraint_error, 1e-10);
    ASSERT_EQ(cert.expectations.size(), model.constraints.size());
    for (std::size_t k = 0; k < cert.expectations.size(); ++k)
      EXPECT_NEAR(cert.expectations[k], cert.sector_signs[k], 1e-10);
    for (double n : cert.occupations) EXPECT_NEAR(n, 0.0, 1e-12);
    EXPECT_NEAR(cert.energy, 0.0, 1e-12);
    EXPECT_GT(cert.survival_probability, 0.0);
    // interactions leave the vacuum invariant up to a phase
    const auto plan = group_terms(model, 0.3);
    auto s = cert.state;
    apply_group(s, plan.groups.back(), 0.3);
    EXPECT_NEAR(std::abs(cert.state.amplitudes().dot(s.amplitudes())), 1.0, 1e-12);
  }
  EXPECT_THROW(vacuum_prepare(build_hamiltonian(MappingKind::AuxiliaryParity, k2x2, HubbardModel{})),
               std::invalid_argument);
}
