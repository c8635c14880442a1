#include "ququart/decomposition.hpp"

#include "../fixtures/printed_conjugations.hpp"
#include "../support/oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ququart;

namespace {

double max_abs(const MatrixXc& m) { return m.cwiseAbs().maxCoeff(); }

bool is_unitary(const MatrixXc& u, double tol) {
  return max_abs(u * u.adjoint() - MatrixXc::Identity(u.rows(), u.cols())) < tol;
}

}  // namespace

TEST(Decomposition, PrintedMatricesSatisfyTheirRelations) {
  for (const auto& c : printed::cases()) {
    EXPECT_TRUE(is_unitary(c.u, 1e-12)) << c.name;
    EXPECT_LT(max_abs(c.u * c.a * c.u.adjoint() - c.d), 1e-9) << c.name;
  }
}

TEST(Decomposition, SolverSatisfiesPrintedRelations) {
  std::mt19937_64 rng(17);
  const MatrixXc id4 = MatrixXc::Identity(4, 4);
  for (const auto& c : printed::cases()) {
    const auto sol = solve_conjugation(c.a, c.d);
    EXPECT_TRUE(is_unitary(sol.u, 1e-12)) << c.name;
    EXPECT_LT(max_abs(sol.u * c.a * sol.u.adjoint() - c.d), 1e-10) << c.name;
    for (int trial = 0; trial < 10; ++trial) {
      const MatrixXc b = oracle::random_hermitian(4, rng);
      const double theta = std::uniform_real_distribution<double>(-2, 2)(rng);
      const MatrixXc lhs = oracle::expm(oracle::kron(c.a, b), theta);
      const MatrixXc ut = oracle::kron(sol.u, id4);
      const MatrixXc rhs = ut.adjoint() * oracle::expm(oracle::kron(c.d, b), theta) * ut;
      EXPECT_LT(max_abs(lhs - rhs), 1e-10) << c.name;
    }
  }
}

TEST(Decomposition, SolverIsDeterministic) {
  const auto c = printed::cases().front();
  const auto a = solve_conjugation(c.a, c.d);
  const auto b = solve_conjugation(c.a, c.d);
  EXPECT_TRUE((a.u.array() == b.u.array()).all());
}

TEST(Decomposition, SolverTrivialAndErrorCases) {
  Eigen::VectorXd diag(4);
  diag << 2, -1, -1, 0.5;
  const MatrixXc d = diag.cast<Complex>().asDiagonal();
  const auto sol = solve_conjugation(d, d);
  EXPECT_LT(max_abs(sol.u * d * sol.u.adjoint() - d), 1e-12);
  MatrixXc other = d;
  other(0, 0) = 3.0;
  EXPECT_THROW(solve_conjugation(d, other), std::invalid_argument);
  MatrixXc skew = d;
  skew(0, 1) = 1.0;
  EXPECT_THROW(solve_conjugation(skew, d), std::invalid_argument);
}

TEST(Decomposition, HermitianExp) {
  std::mt19937_64 rng(3);
  const MatrixXc h = oracle::random_hermitian(8, rng);
  EXPECT_LT(max_abs(hermitian_exp(h, Complex(0, -0.4)) - oracle::expm(h, 0.4)), 1e-12);
}

TEST(Decomposition, TemplatesReproduceTermExponentials) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (const auto kind : {MappingKind::SpinlessLocal, MappingKind::SpinSplit, MappingKind::AuxiliaryParity}) {
    const Mapping m(kind, {2, 2, Boundary::Open});
    for (const auto term : {TemplateTerm::HopX, TemplateTerm::HopY, TemplateTerm::Interaction}) {
      for (const auto spin : m.spins()) {
        if (term == TemplateTerm::Interaction && spin == Spin::Down) continue;
        const auto sp = term == TemplateTerm::Interaction ? std::nullopt : spin;
        const OperatorSum op = template_term(kind, term, sp);
        const Circuit c = circuit_template(kind, term, sp);
        const auto support = op.support();
        const MatrixXc dense = to_dense_on(op, support);
        for (int k = 0; k < 5; ++k) {
          const double theta = angle(rng);
          EXPECT_LT(max_abs(c.unitary(theta, support) - oracle::expm(dense, theta)), 1e-10)
              << to_string(kind) << " " << to_string(term);
        }
        int two = 0;
        for (const auto& g : c.gates) two += g.qudits.size() == 2;
        EXPECT_EQ(c.two_qudit_count(), two);
      }
    }
  }
  EXPECT_THROW(circuit_template(MappingKind::GeneralizedJW, TemplateTerm::HopY, Spin::Up), std::invalid_argument);
}

TEST(Decomposition, AuxiliaryParityTemplateShapes) {
  const Circuit hx = circuit_template(MappingKind::AuxiliaryParity, TemplateTerm::HopX, Spin::Up);
  EXPECT_EQ(hx.two_qudit_count(), 4);
  const Circuit hy = circuit_template(MappingKind::AuxiliaryParity, TemplateTerm::HopY, Spin::Up);
  EXPECT_EQ(hy.two_qudit_count(), 6);
  EXPECT_EQ(hy.two_qudit_depth(), 4);
  const Circuit hop = circuit_template(MappingKind::SpinlessLocal, TemplateTerm::HopX);
  EXPECT_EQ(hop.two_qudit_count(), 2);
  const Circuit inter = circuit_template(MappingKind::SpinlessLocal, TemplateTerm::Interaction);
  EXPECT_EQ(inter.two_qudit_count(), 1);
}

TEST(Decomposition, GateCounts) {
  const auto sl = gate_count(MappingKind::SpinlessLocal);
  EXPECT_EQ(sl.total, 5);
  EXPECT_EQ(sl.depth, 5);
  const auto ss = gate_count(MappingKind::SpinSplit);
  EXPECT_EQ(ss.total, 9);
  EXPECT_EQ(ss.depth, 5);
  const auto ap = gate_count(MappingKind::AuxiliaryParity);
  EXPECT_EQ(ap.total, 20);
  for (const auto* r : {&sl, &ss, &ap}) EXPECT_EQ(r->total, r->hop_x + r->hop_y + r->interaction);
  const std::string md = gate_count_markdown({sl, ss, ap});
  const std::string csv = gate_count_csv({sl, ss, ap});
  EXPECT_NE(md.find("| spin_split"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(Decomposition, WeightTable) {
  const auto rows = weight_table();
  auto find = [&](const std::string& method) -> const WeightRow& {
    for (const auto& r : rows)
      if (r.method == method) return r;
    throw std::out_of_range(method);
  };
  const auto& sl = find("Spinless local");
  EXPECT_EQ(std::tuple(sl.w_x, sl.w_y, sl.w_int, sl.w_g), std::tuple(2, 2, 2, 4));
  const auto& ss = find("Local spin split");
  EXPECT_EQ(std::tuple(ss.w_x, ss.w_y, ss.w_int, ss.w_g), std::tuple(2, 2, 2, 4));
  const auto& ap = find("Spinful auxiliary parity");
  EXPECT_EQ(std::tuple(ap.w_x, ap.w_y, ap.w_int, ap.w_g), std::tuple(3, 4, 1, 6));
  const auto& jw = find("Generalized JW (qudit)");
  EXPECT_EQ(std::tuple(jw.w_x, jw.w_y, jw.w_int, jw.w_g), std::tuple(2, 4, 1, -1));
  EXPECT_FALSE(sl.reference_only);
  for (int lx : {2, 3, 4})
    EXPECT_EQ(hopping_weight(MappingKind::GeneralizedJW, {lx, 2, Boundary::Open}, Orientation::Vertical), lx + 1);
  EXPECT_EQ(hopping_weight(MappingKind::GeneralizedJW, {5, 1, Boundary::Open}, Orientation::Horizontal), 2);
  EXPECT_FALSE(weight_table_markdown(rows).empty());
  EXPECT_FALSE(weight_table_csv(rows).empty());
}

TEST(Decomposition, ReferenceRowsAreFlagged) {
  int reference = 0;
  for (const auto& r : weight_table())
    if (r.reference_only) ++reference;
  EXPECT_EQ(reference, 2);
}
