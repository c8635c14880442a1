#include "ququart/mappings.hpp"
#include "ququart/sector.hpp"
#include "ququart/statevector.hpp"

#include "../support/oracle.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ququart;

namespace {

VectorXc random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXc v(Eigen::Index{1} << (2 * n));
  for (auto& x : v) x = Complex(g(rng), g(rng));
  return v.normalized();
}

MatrixXc random_unitary(int d, std::mt19937_64& rng) {
  return oracle::expm(oracle::random_hermitian(d, rng), 1.0);
}

// Dense operator of a matrix on `support` inside n qudits, by permuting the
// Kronecker product of matrix ⊗ identity.
MatrixXc embed_on(const MatrixXc& m, const std::vector<int>& support, int n) {
  const int k = static_cast<int>(support.size());
  std::vector<int> rest;
  for (int q = 0; q < n; ++q)
    if (std::find(support.begin(), support.end(), q) == support.end()) rest.push_back(q);
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  MatrixXc out = MatrixXc::Zero(dim, dim);
  auto digit = [&](Eigen::Index x, int q) { return static_cast<int>((x >> (2 * (n - 1 - q))) & 3); };
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      bool same = true;
      for (int q : rest) same = same && digit(r, q) == digit(c, q);
      if (!same) continue;
      int lr = 0, lc = 0;
      for (int j = 0; j < k; ++j) {
        lr = lr * 4 + digit(r, support[j]);
        lc = lc * 4 + digit(c, support[j]);
      }
      out(r, c) = m(lr, lc);
    }
  }
  return out;
}

}  // namespace

TEST(Statevector, ZeroAndProductStates) {
  const auto one = QuditState::zero(1);
  EXPECT_EQ(one.dim(), 4);
  EXPECT_EQ(one.amplitudes()[0], Complex(1.0));
  const auto six = QuditState::zero(6);
  EXPECT_EQ(six.dim(), 4096);
  EXPECT_EQ(six.amplitudes().norm(), 1.0);
  const std::vector<int> levels{1, 0, 3};
  const auto p = QuditState::product(levels);
  EXPECT_EQ(p.amplitudes()[(1 << 4) | 3], Complex(1.0));
}

TEST(Statevector, BudgetIsEnforced) {
  try {
    QuditState::zero(13);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_EQ(e.required_bytes, std::size_t{16} << 26);
    EXPECT_EQ(e.budget_bytes, kDefaultMemoryBudget);
  }
  EXPECT_THROW(QuditState::zero(4, 1024), BudgetExceeded);
  EXPECT_NO_THROW(QuditState::zero(4, 1 << 20));
}

TEST(Statevector, IdentityLeavesStateBitwiseUnchanged) {
  std::mt19937_64 rng(1);
  auto s = QuditState::from_amplitudes(3, random_state(3, rng));
  const VectorXc before = s.amplitudes();
  const std::vector<int> sup{2, 0};
  apply_local(s, sup, MatrixXc::Identity(16, 16));
  EXPECT_TRUE((s.amplitudes().array() == before.array()).all());
}

TEST(Statevector, TildeOnVacuumIsTrivial) {
  auto s = QuditState::zero(2);
  const std::vector<int> sup{0};
  apply_local(s, sup, MatrixXc(gamma_tilde().matrix()));
  EXPECT_EQ(s.amplitudes()[0], Complex(1.0));
}

TEST(Statevector, ApplyLocalMatchesDenseOracle) {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 5; ++n) {
    for (int k = 1; k <= std::min(n, 4); ++k) {
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<int> qs(static_cast<std::size_t>(n));
        std::iota(qs.begin(), qs.end(), 0);
        std::shuffle(qs.begin(), qs.end(), rng);
        const std::vector<int> support(qs.begin(), qs.begin() + k);
        const MatrixXc u = random_unitary(1 << (2 * k), rng);
        const VectorXc v = random_state(n, rng);
        auto s = QuditState::from_amplitudes(n, v);
        apply_local(s, support, u);
        const VectorXc expected = embed_on(u, support, n) * v;
        ASSERT_LT((s.amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-12) << n << " " << k;
        ASSERT_NEAR(s.amplitudes().norm(), 1.0, 1e-12);
      }
    }
  }
}

TEST(Statevector, ApplyLocalRejectsBadSupport) {
  auto s = QuditState::zero(3);
  const std::vector<int> dup{1, 1};
  EXPECT_THROW(apply_local(s, dup, MatrixXc::Identity(16, 16)), std::invalid_argument);
  const std::vector<int> one{0};
  EXPECT_THROW(apply_local(s, one, MatrixXc::Identity(16, 16)), std::invalid_argument);
}

TEST(Statevector, CompositionOrder) {
  std::mt19937_64 rng(3);
  const std::vector<int> sup{1, 0};
  const MatrixXc a = random_unitary(16, rng), b = random_unitary(16, rng);
  const VectorXc v = random_state(2, rng);
  auto s = QuditState::from_amplitudes(2, v);
  apply_local(s, sup, a);
  apply_local(s, sup, b);
  EXPECT_LT((s.amplitudes() - embed_on(b * a, sup, 2) * v).norm(), 1e-12);
}

TEST(Statevector, ExponentialMatchesDenseOracle) {
  std::mt19937_64 rng(4);
  const MatrixXc tt = oracle::kron(oracle::gamma(0), oracle::gamma(0));
  const auto term = LocalTerm::from_matrix({0, 2}, tt);
  EXPECT_TRUE(term.involutory);
  const VectorXc v = random_state(3, rng);
  for (double theta : {0.0, 0.3, -1.1, M_PI}) {
    auto s = QuditState::from_amplitudes(3, v);
    apply_exp(s, term, theta);
    const VectorXc expected = embed_on(oracle::expm(tt, theta), {0, 2}, 3) * v;
    EXPECT_LT((s.amplitudes() - expected).cwiseAbs().maxCoeff(), 1e-12) << theta;
  }
  // a non-involutory generator takes the eigendecomposition path
  const MatrixXc h = oracle::random_hermitian(16, rng);
  const auto general = LocalTerm::from_matrix({2, 1}, h);
  EXPECT_FALSE(general.involutory);
  auto s = QuditState::from_amplitudes(3, v);
  apply_exp(s, general, 0.7);
  EXPECT_LT((s.amplitudes() - embed_on(oracle::expm(h, 0.7), {2, 1}, 3) * v).cwiseAbs().maxCoeff(), 1e-12);
  apply_exp(s, general, -0.7);
  EXPECT_LT((s.amplitudes() - v).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(LocalTerm::from_matrix({0}, kI * MatrixXc::Identity(4, 4)), std::invalid_argument);
}

TEST(Statevector, InvolutoryExponentialAtPi) {
  std::mt19937_64 rng(5);
  const MatrixXc g = oracle::gamma(1);
  const VectorXc v = random_state(2, rng);
  auto s = QuditState::from_amplitudes(2, v);
  apply_exp(s, LocalTerm::from_matrix({1}, g), M_PI / 2);
  EXPECT_LT((s.amplitudes() + kI * embed_on(g, {1}, 2) * v).norm(), 1e-12);
}

TEST(Statevector, OperatorApplicationAndExpectation) {
  std::mt19937_64 rng(6);
  const int n = 3;
  const OperatorSum op = OperatorSum(QuditMonomial(0.5, {{0, gamma(1)}, {2, gamma(3)}})) +
                         OperatorSum(QuditMonomial::single(1, gamma_tilde(), 0.25)) +
                         OperatorSum(QuditMonomial(kI, {{1, gamma(1)}, {1, gamma(2)}}));
  const VectorXc v = random_state(n, rng);
  const auto s = QuditState::from_amplitudes(n, v);
  const MatrixXc d = to_dense(op, n);
  EXPECT_LT((apply_operator(s, op) - d * v).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT(std::abs(expectation(s, op) - v.dot(d * v)), 1e-13);
  EXPECT_NEAR(expectation(s, OperatorSum::identity()).real(), 1.0, 1e-14);
  EXPECT_NO_THROW(expectation_real(s, op));
  EXPECT_THROW(expectation_real(s, OperatorSum(QuditMonomial::single(0, gamma(1), kI))), std::domain_error);
}

TEST(Statevector, HamiltonianExpectationIsReal) {
  std::mt19937_64 rng(7);
  const auto model = build_hamiltonian(MappingKind::SpinlessLocal, {3, 2, Boundary::Open}, TVModel{1.0, 0.5});
  const auto s = QuditState::from_amplitudes(6, random_state(6, rng));
  EXPECT_LT(std::abs(expectation(s, model.hamiltonian).imag()), 1e-10);
}

TEST(Statevector, ProjectionOntoConstraintSector) {
  const LatticeSpec spec{2, 2, Boundary::Open};
  const auto model = build_hamiltonian(MappingKind::SpinlessLocal, spec, TVModel{1.0, 0.5});
  auto s = QuditState::zero(4);
  const double p = project_constraints(s, std::span<const OperatorSum>(model.constraints),
                                       std::span<const int>(model.sector_signs));
  EXPECT_NEAR(p, 0.5, 1e-14);
  for (std::size_t k = 0; k < model.constraints.size(); ++k)
    EXPECT_NEAR(expectation_real(s, model.constraints[k]), model.sector_signs[k], 1e-10);
  const VectorXc once = s.amplitudes();
  const double again = project_constraints(s, std::span<const OperatorSum>(model.constraints),
                                           std::span<const int>(model.sector_signs));
  EXPECT_NEAR(again, 1.0, 1e-12);
  EXPECT_LT((s.amplitudes() - once).norm(), 1e-12);
  // the vacuum holds no fermions
  const Mapping m = model.mapping();
  for (const auto site : enumerate_sites(spec))
    EXPECT_NEAR(expectation_real(s, number_operator(m, site)), 0.0, 1e-12);
  // opposite sign annihilates the projected state
  const std::vector<int> flipped{-model.sector_signs[0]};
  EXPECT_THROW(project_constraints(s, std::span<const OperatorSum>(model.constraints),
                                   std::span<const int>(flipped)),
               std::runtime_error);
}

TEST(Statevector, PairCreationOccupiesBothSites) {
  const LatticeSpec spec{2, 2, Boundary::Open};
  const auto model = build_hamiltonian(MappingKind::SpinlessLocal, spec, TVModel{1.0, 0.5});
  const Mapping m = model.mapping();
  auto s = QuditState::product(vacuum_levels(m));
  project_constraints(s, std::span<const OperatorSum>(model.constraints),
                      std::span<const int>(model.sector_signs));
  const Edge e = edge_between(spec, {0, 0}, {1, 0});
  const OperatorSum pc = pair_creation(m, e);
  apply_and_normalize(s, pc);
  EXPECT_NEAR(expectation_real(s, number_operator(m, {0, 0})), 1.0, 1e-12);
  EXPECT_NEAR(expectation_real(s, number_operator(m, {1, 0})), 1.0, 1e-12);
  EXPECT_NEAR(expectation_real(s, number_operator(m, {0, 1})), 0.0, 1e-12);
  EXPECT_LT(apply_operator(s, pc).norm(), 1e-12);
  EXPECT_THROW(apply_and_normalize(s, pc), std::runtime_error);
}

TEST(Statevector, CompiledGeneratorsMatchDenseExponentials) {
  std::mt19937_64 rng(8);
  const int n = 4;
  const Mapping m(MappingKind::SpinlessLocal, {2, 2, Boundary::Open});
  const OperatorSum hop = hopping_sum(m, edge_between(m.spec(), {0, 0}, {0, 1}));
  const auto flip = compile_flip(hop, n);
  ASSERT_TRUE(flip.has_value());
  const OperatorSum diag = 0.5 * OperatorSum(QuditMonomial(1.0, {{1, gamma_tilde()}, {3, gamma_tilde()}})) +
                           OperatorSum(QuditMonomial::single(2, gamma_tilde(), -0.3));
  const auto dg = compile_diagonal(diag, n);
  ASSERT_TRUE(dg.has_value());
  EXPECT_FALSE(compile_diagonal(hop, n).has_value());

  const VectorXc v = random_state(n, rng);
  auto s = QuditState::from_amplitudes(n, v);
  apply_flip_exp(s, *flip, 0.37);
  EXPECT_LT((s.amplitudes() - oracle::expm(to_dense(hop, n), 0.37) * v).cwiseAbs().maxCoeff(), 1e-12);

  auto t = QuditState::from_amplitudes(n, v);
  const std::vector<DiagonalGenerator> gens{*dg};
  apply_diagonal_exp(t, std::span<const DiagonalGenerator>(gens), -0.9);
  EXPECT_LT((t.amplitudes() - oracle::expm(to_dense(diag, n), -0.9) * v).cwiseAbs().maxCoeff(), 1e-12);
  const auto ev = diagonal_expectations(t, std::span<const DiagonalGenerator>(gens));
  EXPECT_NEAR(ev[0], expectation_real(t, diag), 1e-12);
}

TEST(Statevector, FusedPassesAreBitwiseEqualToSequential) {
  std::mt19937_64 rng(9);
  const int n = 5;
  std::vector<FusedKernel> kernels;
  for (int k = 0; k < 6; ++k) {
    const int a = static_cast<int>(rng() % n);
    const int b = (a + 1 + static_cast<int>(rng() % (n - 1))) % n;
    kernels.push_back({LocalTerm::from_matrix({a, b}, oracle::random_hermitian(16, rng)), 0.1 * (k + 1)});
  }
  const VectorXc v = random_state(n, rng);
  auto seq = QuditState::from_amplitudes(n, v);
  for (const auto& k : kernels) apply_exp(seq, std::get<LocalTerm>(k.generator), k.theta);
  for (int block : {2, 3, 5}) {
    auto fused = QuditState::from_amplitudes(n, v);
    for (const auto& pass : fuse_kernels<Complex>(n, std::span<const FusedKernel>(kernels), block))
      pass.apply(fused);
    EXPECT_TRUE((fused.amplitudes().array() == seq.amplitudes().array()).all()) << "block " << block;
  }
}
