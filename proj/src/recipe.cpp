#include "ququart/recipe.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace ququart {

StateRecipe preset_recipe(const std::string& name) {
  using K = FermionOp::Kind;
  const double a = 1.0 / std::sqrt(2.0);
  StateRecipe r;
  r.name = name;
  r.spec = LatticeSpec{3, 2, Boundary::Open};
  const Site s0{0, 0}, s1{1, 0}, s2{2, 0}, s4{1, 1};
  if (name == "tv_2x3") {
    r.spinful = false;
    r.factors.push_back({{{1.0, FermionOp{K::PairCreation, s0, s1, std::nullopt}}}});
    r.factors.push_back({{{a, std::nullopt}, {a, FermionOp{K::Hopping, s1, s2, std::nullopt}}}});
  } else if (name == "fh_2x3") {
    r.spinful = true;
    r.factors.push_back({{{1.0, FermionOp{K::PairCreation, s0, s1, Spin::Down}}}});
    r.factors.push_back({{{1.0, FermionOp{K::PairCreation, s0, s1, Spin::Up}}}});
    r.factors.push_back({{{a, std::nullopt}, {a, FermionOp{K::Hopping, s1, s4, Spin::Up}}}});
  } else {
    throw std::invalid_argument("unknown initial-state preset '" + name + "'");
  }
  return r;
}

SparseMatrixc fock_operator(const LatticeSpec& spec, bool spinful, const FermionOp& op) {
  if (spinful != op.spin.has_value())
    throw std::invalid_argument("spin label does not match the model");
  edge_between(spec, op.i, op.j);  // neighbours only, like the qudit side
  const int n_modes = spinful ? 2 * spec.n_sites() : spec.n_sites();
  const SparseMatrixc ci = creation_matrix(n_modes, fermion_mode(spec, op.i, op.spin));
  const SparseMatrixc cj = creation_matrix(n_modes, fermion_mode(spec, op.j, op.spin));
  if (op.kind == FermionOp::Kind::PairCreation) return ci * cj;
  const SparseMatrixc ij = ci * SparseMatrixc(cj.adjoint());
  return ij + SparseMatrixc(ij.adjoint());
}

OperatorSum qudit_operator(const Mapping& m, const FermionOp& op) {
  const Edge e = edge_between(m.spec(), op.i, op.j);
  if (op.kind == FermionOp::Kind::PairCreation) return pair_creation(m, e, op.spin);
  return 0.5 * hopping_sum(m, e, op.spin);
}

FockState apply_recipe(const StateRecipe& recipe) {
  const int n_modes = recipe.spinful ? 2 * recipe.spec.n_sites() : recipe.spec.n_sites();
  FockState s{FockBasis::full(n_modes), VectorXc::Zero(Eigen::Index{1} << n_modes)};
  s.amplitudes[0] = 1.0;
  for (const auto& f : recipe.factors) {
    VectorXc next = VectorXc::Zero(s.amplitudes.size());
    for (const auto& [c, op] : f.terms) {
      if (op)
        next += c * (fock_operator(recipe.spec, recipe.spinful, *op) * s.amplitudes);
      else
        next += c * s.amplitudes;
    }
    s.amplitudes = std::move(next);
  }
  const double norm = s.amplitudes.norm();
  if (norm < 1e-12) throw std::runtime_error("recipe annihilates the vacuum");
  s.amplitudes /= norm;
  return s;
}

std::pair<int, int> particle_numbers(const FockState& state, int n_sites) {
  std::optional<std::pair<int, int>> found;
  const FockBasis::Word up_mask = (FockBasis::Word{1} << n_sites) - 1;
  for (Eigen::Index i = 0; i < state.basis.size(); ++i) {
    if (std::abs(state.amplitudes[i]) < 1e-14) continue;
    const auto w = state.basis.state(i);
    const std::pair<int, int> n{std::popcount(w & up_mask), std::popcount(w >> n_sites)};
    if (found && *found != n) throw std::invalid_argument("state mixes particle-number sectors");
    found = n;
  }
  if (!found) throw std::invalid_argument("state is zero");
  return *found;
}

}  // namespace ququart
