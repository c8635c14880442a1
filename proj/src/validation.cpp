#include "ququart/validation.hpp"

#include <algorithm>
#include <cmath>

namespace ququart {

namespace {

std::vector<int> joint_support(const OperatorSum& a, const OperatorSum& b) {
  auto s = a.support();
  const auto t = b.support();
  s.insert(s.end(), t.begin(), t.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.empty()) s.push_back(0);
  return s;
}

double max_entry(const SparseMatrixc& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrixc::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

QuditMonomial corrupt(const QuditMonomial& op) {
  const auto fs = op.factors();
  std::vector<QuditMonomial::Factor> out(fs.begin(), fs.end());
  const auto mask = out.front().second.mask();
  const bool one = ((mask & 1) != 0) != ((mask & 4) != 0);
  out.front().second = SiteFactor::from_mask(static_cast<std::uint8_t>(mask ^ (one ? 0x5 : 0x1)));
  return QuditMonomial(op.coefficient(), std::span<const QuditMonomial::Factor>(out));
}

bool shares_mode(const TaggedOperator& a, const TaggedOperator& b) {
  for (int x : a.modes)
    if (std::find(b.modes.begin(), b.modes.end(), x) != b.modes.end()) return true;
  return false;
}

}  // namespace

double relation_error(const OperatorSum& a, const OperatorSum& b, int sign) {
  const auto s = joint_support(a, b);
  const SparseMatrixc ma = to_sparse_on(a, s);
  const SparseMatrixc mb = to_sparse_on(b, s);
  const SparseMatrixc r = ma * mb - static_cast<double>(sign) * SparseMatrixc(mb * ma);
  return max_entry(r);
}

ValidationReport validate_mapping(const Mapping& m, const ValidationOptions& options) {
  ValidationReport rep;
  rep.kind = m.kind();
  rep.spec = m.spec();
  auto record = [&](bool symbolic_ok, double err, double tol, const std::string& what) {
    rep.max_error = std::max(rep.max_error, err);
    if (!symbolic_ok || err > tol) rep.failures.push_back(what + " violated (error " + std::to_string(err) + ")");
  };

  auto ops = rule_table_operators(m);
  if (options.fault_edge) {
    int k = 0;
    for (auto& t : ops) {
      if (t.name.front() != 'A') continue;
      if (k++ == *options.fault_edge) {
        t.op = corrupt(t.op);
        break;
      }
    }
  }

  for (std::size_t a = 0; a < ops.size(); ++a) {
    for (std::size_t b = a + 1; b < ops.size(); ++b) {
      const bool anti = shares_mode(ops[a], ops[b]);
      const int sign = anti ? -1 : 1;
      const bool symbolic = ops[a].op.commutes_with(ops[b].op) != anti;
      const double err = relation_error(ops[a].op, ops[b].op, sign);
      ++rep.rule_pairs;
      const bool cross = (ops[a].modes.front() % 2) != (ops[b].modes.front() % 2);
      if (cross) ++rep.cross_spin;
      record(symbolic, err, options.tol,
             std::string(anti ? "{" : "[") + ops[a].name + ", " + ops[b].name + (anti ? "} = 0" : "] = 0"));
    }
  }

  for (const auto& t : ops) {
    const OperatorSum o(t.op);
    const OperatorSum sq = o * o;
    const double err = std::max(max_abs_difference(o, o.adjoint()),
                                max_abs_difference(sq, OperatorSum::identity()));
    ++rep.involution;
    record(true, err, options.tol, t.name + " Hermitian and involutory");
  }

  for (const auto spin : m.spins()) {
    for (const auto& e : all_edges(m.spec())) {
      const OperatorSum fwd(edge_operator(m, e, spin));
      const OperatorSum rev(edge_operator(m, e.reverse(), spin));
      ++rep.antisymmetry;
      record(true, max_abs_difference(rev, -fwd), options.tol,
             "A" + to_string(e.reverse()) + " = -A" + to_string(e));
    }
  }

  if (!options.constraints || !has_constraints(m.kind())) return rep;

  std::vector<std::string> labels;
  const auto gens = constraint_generators(m, &labels);
  const ModelParams params = is_spinful(m.kind()) ? ModelParams{HubbardModel{1.0, 0.5}}
                                                  : ModelParams{TVModel{1.0, 0.5}};
  const MappedModel model = build_hamiltonian(m.kind(), m.spec(), params, 1);
  for (std::size_t p = 0; p < gens.size(); ++p) {
    const OperatorSum g(gens[p]);
    const SparseMatrixc mg = to_sparse_on(g, g.support());
    const SparseMatrixc sq = mg * mg;
    SparseMatrixc id(mg.rows(), mg.cols());
    id.setIdentity();
    const double err = std::max(max_entry(mg - SparseMatrixc(mg.adjoint())), max_entry(sq - id));
    ++rep.involution;
    record(true, err, options.constraint_tol, labels[p] + " Hermitian and involutory");
    for (std::size_t q = p + 1; q < gens.size(); ++q) {
      const OperatorSum h(gens[q]);
      ++rep.constraint_pairs;
      record(gens[p].commutes_with(gens[q]), relation_error(g, h, 1), options.constraint_tol,
             "[" + labels[p] + ", " + labels[q] + "] = 0");
    }
    for (const auto& term : model.terms) {
      ++rep.constraint_hamiltonian;
      record(commutator(g, term.op).empty(), relation_error(g, term.op, 1), options.constraint_tol,
             "[" + labels[p] + ", H term] = 0");
    }
  }
  return rep;
}

}  // namespace ququart
