#include "ququart/fermion_oracle.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace ququart {

int fermion_mode(const LatticeSpec& spec, Site s, std::optional<Spin> spin) {
  if (!spec.contains(s)) throw std::out_of_range("site " + to_string(s) + " is off the lattice");
  return spec.index(s) + (spin == Spin::Down ? spec.n_sites() : 0);
}

FockBasis::FockBasis(int n_modes, std::vector<Word> states)
    : n_modes_(n_modes), states_(std::move(states)) {
  std::sort(states_.begin(), states_.end());
}

FockBasis FockBasis::full(int n_modes) {
  if (n_modes < 0 || n_modes > kMaxFermionModes)
    throw std::length_error("Fock basis limited to " + std::to_string(kMaxFermionModes) + " modes");
  std::vector<Word> s(std::size_t{1} << n_modes);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<Word>(i);
  return FockBasis(n_modes, std::move(s));
}

FockBasis FockBasis::with_numbers(int n_sites, bool spinful, int n_up, int n_down) {
  const int n_modes = spinful ? 2 * n_sites : n_sites;
  if (n_modes > kMaxFermionModes)
    throw std::length_error("Fock basis limited to " + std::to_string(kMaxFermionModes) + " modes");
  const Word up_mask = (Word{1} << n_sites) - 1;
  std::vector<Word> s;
  for (Word w = 0; w < (Word{1} << n_modes); ++w) {
    if (std::popcount(w & up_mask) != n_up) continue;
    if (std::popcount(w >> n_sites) != (spinful ? n_down : 0)) continue;
    s.push_back(w);
  }
  return FockBasis(n_modes, std::move(s));
}

std::optional<Eigen::Index> FockBasis::index_of(Word w) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), w);
  if (it == states_.end() || *it != w) return std::nullopt;
  return static_cast<Eigen::Index>(it - states_.begin());
}

SparseMatrixc creation_matrix(int n_modes, int mode) {
  if (n_modes > kMaxFermionModes) throw std::length_error("too many fermionic modes");
  if (mode < 0 || mode >= n_modes) throw std::out_of_range("mode out of range");
  const Eigen::Index dim = Eigen::Index{1} << n_modes;
  const std::uint32_t bit = 1u << mode;
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(static_cast<std::size_t>(dim / 2));
  for (std::uint32_t w = 0; w < static_cast<std::uint32_t>(dim); ++w) {
    if (w & bit) continue;
    const double sign = (std::popcount(w & (bit - 1)) & 1) ? -1.0 : 1.0;
    t.emplace_back(static_cast<Eigen::Index>(w | bit), static_cast<Eigen::Index>(w), sign);
  }
  SparseMatrixc c(dim, dim);
  c.setFromTriplets(t.begin(), t.end());
  return c;
}

SparseMatrixc number_matrix(int n_modes, int mode) {
  const SparseMatrixc c = creation_matrix(n_modes, mode);
  return c * SparseMatrixc(c.adjoint());
}

SparseMatrixc restrict_to(const SparseMatrixc& full, const FockBasis& basis) {
  std::vector<Eigen::Triplet<Complex>> t;
  for (Eigen::Index col = 0; col < basis.size(); ++col) {
    for (SparseMatrixc::InnerIterator it(full, basis.state(col)); it; ++it) {
      if (auto row = basis.index_of(static_cast<FockBasis::Word>(it.row())))
        t.emplace_back(*row, col, it.value());
    }
  }
  SparseMatrixc out(basis.size(), basis.size());
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

FermionHamiltonian build_fermion_hamiltonian(const LatticeSpec& spec, const ModelParams& params,
                                             const std::optional<FockBasis>& basis) {
  spec.validate();
  const bool spinful = std::holds_alternative<HubbardModel>(params);
  const int n_modes = spinful ? 2 * spec.n_sites() : spec.n_sites();
  if (n_modes > kMaxFermionModes)
    throw std::length_error("fermionic oracle limited to " + std::to_string(kMaxFermionModes) +
                            " modes");
  if (basis && basis->n_modes() != n_modes)
    throw std::invalid_argument("basis does not match the lattice");

  std::vector<SparseMatrixc> c(static_cast<std::size_t>(n_modes));
  std::vector<SparseMatrixc> n(static_cast<std::size_t>(n_modes));
  for (int i = 0; i < n_modes; ++i) {
    c[i] = creation_matrix(n_modes, i);
    n[i] = c[i] * SparseMatrixc(c[i].adjoint());
  }
  const Eigen::Index dim = Eigen::Index{1} << n_modes;
  SparseMatrixc h(dim, dim);
  std::vector<std::optional<Spin>> spins{std::nullopt};
  if (spinful) spins = {Spin::Up, Spin::Down};
  const double hop = spinful ? std::get<HubbardModel>(params).j : std::get<TVModel>(params).t;

  for (const auto& e : all_edges(spec)) {
    for (const auto spin : spins) {
      const int i = fermion_mode(spec, e.from, spin);
      const int j = fermion_mode(spec, e.to, spin);
      const SparseMatrixc ij = c[i] * SparseMatrixc(c[j].adjoint());
      h += -hop * (ij + SparseMatrixc(ij.adjoint()));
    }
    if (!spinful) {
      const int i = fermion_mode(spec, e.from);
      const int j = fermion_mode(spec, e.to);
      h += std::get<TVModel>(params).v * (n[i] * n[j]);
    }
  }
  if (spinful) {
    for (const auto s : enumerate_sites(spec))
      h += std::get<HubbardModel>(params).u *
           (n[fermion_mode(spec, s, Spin::Up)] * n[fermion_mode(spec, s, Spin::Down)]);
  }
  h.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return std::abs(v) > 1e-14; });

  FermionHamiltonian out{spec, spinful, basis ? *basis : FockBasis::full(n_modes), {}};
  out.matrix = basis ? restrict_to(h, *basis) : h;
  return out;
}

ExactPropagator::ExactPropagator(const FermionHamiltonian& h) {
  const MatrixXc dense(h.matrix);
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(dense);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  lambda_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

VectorXc ExactPropagator::evolve(const VectorXc& psi0, double t) const {
  if (psi0.size() != vectors_.rows()) throw std::invalid_argument("state has wrong dimension");
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw std::invalid_argument("state is not normalized");
  VectorXc c = vectors_.adjoint() * psi0;
  for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(Complex(0.0, -lambda_[k] * t));
  return vectors_ * c;
}

VectorXc exact_evolve(const FermionHamiltonian& h, const VectorXc& psi0, double t) {
  return ExactPropagator(h).evolve(psi0, t);
}

double occupation(const FockBasis& basis, const VectorXc& psi, int mode) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < basis.size(); ++i)
    if ((basis.state(i) >> mode) & 1u) s += std::norm(psi[i]);
  return s;
}

std::vector<double> occupations(const FockBasis& basis, const VectorXc& psi) {
  std::vector<double> out(static_cast<std::size_t>(basis.n_modes()), 0.0);
  for (Eigen::Index i = 0; i < basis.size(); ++i) {
    const double p = std::norm(psi[i]);
    for (int m = 0; m < basis.n_modes(); ++m)
      if ((basis.state(i) >> m) & 1u) out[m] += p;
  }
  return out;
}

FockState reference_initial_state(const std::string& name) {
  const double a = 1.0 / std::sqrt(2.0);
  auto word = [](std::initializer_list<int> modes) {
    FockBasis::Word w = 0;
    for (int m : modes) w |= 1u << m;
    return w;
  };
  LatticeSpec spec{3, 2, Boundary::Open};
  int n_modes = 0;
  std::vector<FockBasis::Word> components;
  if (name == "tV_2x3") {
    // rows (1 1 0 / 0 0 0) and (1 0 1 / 0 0 0)
    n_modes = spec.n_sites();
    components = {word({0, 1}), word({0, 2})};
  } else if (name == "FH_2x3") {
    // (↑↓ ↓ 0 / 0 ↑ 0) and (↑↓ ↑↓ 0 / 0 0 0); down modes start at 6
    n_modes = 2 * spec.n_sites();
    components = {word({0, 4, 6, 7}), word({0, 1, 6, 7})};
  } else {
    throw std::invalid_argument("unknown reference state '" + name + "'");
  }
  FockState s{FockBasis::full(n_modes), {}};
  s.amplitudes = VectorXc::Zero(s.basis.size());
  for (auto w : components) s.amplitudes[*s.basis.index_of(w)] = a;
  return s;
}

VectorXc project_onto(const FockState& state, const FockBasis& basis) {
  VectorXc out = VectorXc::Zero(basis.size());
  for (Eigen::Index i = 0; i < state.basis.size(); ++i) {
    const Complex amp = state.amplitudes[i];
    if (amp == Complex{}) continue;
    auto j = basis.index_of(state.basis.state(i));
    if (!j) throw std::invalid_argument("state has weight outside the target basis");
    out[*j] = amp;
  }
  return out;
}

}  // namespace ququart
