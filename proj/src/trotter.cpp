#include "ququart/trotter.hpp"

#include "ququart/fermion_oracle.hpp"
#include "ququart/sector.hpp"

#include <cmath>
#include <stdexcept>

namespace ququart {

int TrotterPlan::active_groups() const {
  int k = 0;
  for (const auto& g : groups) k += g.empty() ? 0 : 1;
  return k;
}

namespace {

constexpr const char* kClassNames[] = {"A", "B", "C"};

std::string slot_label(TermType type, int cls) {
  switch (type) {
    case TermType::HopX: return std::string("hop_x_") + kClassNames[cls];
    case TermType::HopY: return std::string("hop_y_") + kClassNames[cls];
    case TermType::Interaction: return "interaction";
  }
  return {};
}

void compile_into(TrotterGroup& g, const OperatorSum& op, int n) {
  if (auto f = compile_flip(op, n)) {
    g.flips.push_back(std::move(*f));
  } else if (auto d = compile_diagonal(op, n)) {
    g.diagonals.push_back(std::move(*d));
  } else {
    g.fallback.push_back(LocalTerm::from_operator(op));
  }
}

}  // namespace

TrotterPlan group_terms(const MappedModel& model, double tau, int n_steps) {
  TrotterPlan plan;
  plan.n_qudits = model.n_qudits();
  plan.tau = tau;
  plan.n_steps = n_steps;

  int classes = 2;
  for (const auto& t : model.terms)
    if (t.type != TermType::Interaction) classes = std::max(classes, t.parity_class + 1);

  for (TermType type : {TermType::HopX, TermType::HopY}) {
    for (int c = 0; c < classes; ++c) {
      TrotterGroup g;
      g.label = slot_label(type, c);
      g.type = type;
      g.parity_class = c;
      plan.groups.push_back(std::move(g));
    }
  }
  TrotterGroup inter;
  inter.label = slot_label(TermType::Interaction, 0);
  inter.type = TermType::Interaction;
  plan.groups.push_back(std::move(inter));

  for (const auto& t : model.terms) {
    std::size_t slot = plan.groups.size() - 1;
    if (t.type != TermType::Interaction)
      slot = static_cast<std::size_t>((t.type == TermType::HopX ? 0 : classes) + t.parity_class);
    plan.groups[slot].ops.push_back(t.op);
  }

  for (auto& g : plan.groups) {
    for (std::size_t a = 0; a < g.ops.size(); ++a)
      for (std::size_t b = a + 1; b < g.ops.size(); ++b)
        if (!commutator(g.ops[a], g.ops[b]).empty())
          throw std::logic_error("non-commuting terms in Trotter group " + g.label);
    for (const auto& op : g.ops) compile_into(g, op, plan.n_qudits);
  }
  return plan;
}

void apply_group(QuditState& state, const TrotterGroup& group, double theta) {
  for (const auto& f : group.flips) apply_flip_exp(state, f, theta);
  apply_diagonal_exp(state, std::span<const DiagonalGenerator>(group.diagonals), theta);
  for (const auto& t : group.fallback) apply_exp(state, t, theta);
}

std::vector<FusedKernel> step_kernels(const TrotterPlan& plan) {
  std::vector<const TrotterGroup*> active;
  for (const auto& g : plan.groups)
    if (!g.empty()) active.push_back(&g);
  std::vector<FusedKernel> seq;
  auto push = [&](const TrotterGroup& g, double theta) {
    for (const auto& f : g.flips) seq.push_back({f, theta});
    for (const auto& d : g.diagonals) seq.push_back({d, theta});
    for (const auto& t : g.fallback) seq.push_back({t, theta});
  };
  if (active.empty()) return seq;
  const double half = 0.5 * plan.tau;
  const std::size_t m = active.size();
  for (std::size_t j = 0; j + 1 < m; ++j) push(*active[j], half);
  push(*active[m - 1], plan.tau);
  for (std::size_t j = m - 1; j-- > 0;) push(*active[j], half);
  return seq;
}

std::vector<FusedPass<Complex>> compile_step(const TrotterPlan& plan, int block_qudits) {
  const auto seq = step_kernels(plan);
  return fuse_kernels<Complex>(plan.n_qudits, std::span<const FusedKernel>(seq), block_qudits);
}

void apply_step(QuditState& state, std::span<const FusedPass<Complex>> passes) {
  for (const auto& p : passes) p.apply(state);
}

void second_order_step(QuditState& state, const TrotterPlan& plan) {
  const auto passes = compile_step(plan);
  apply_step(state, passes);
}

QuditState prepare_state(const MappedModel& model, const StateRecipe& recipe, double* survival,
                         std::size_t budget) {
  if (!(recipe.spec == model.spec) || recipe.spinful != is_spinful(model.kind))
    throw std::invalid_argument("initial-state recipe does not match the model lattice");
  const Mapping m = model.mapping();
  QuditState psi = QuditState::product(vacuum_levels(m), budget);
  const double p = project_constraints(psi, std::span<const OperatorSum>(model.constraints),
                                       std::span<const int>(model.sector_signs));
  if (survival) *survival = p;
  for (const auto& factor : recipe.factors) {
    OperatorSum op;
    for (const auto& [c, fop] : factor.terms)
      op += fop ? c * qudit_operator(m, *fop) : OperatorSum::identity(c);
    apply_and_normalize(psi, op);
  }
  return psi;
}

std::vector<OperatorSum> occupation_operators(const MappedModel& model) {
  const Mapping m = model.mapping();
  std::vector<OperatorSum> out;
  for (const auto spin : m.spins())
    for (const auto s : enumerate_sites(model.spec)) out.push_back(number_operator(m, s, spin));
  return out;
}

std::vector<std::string> occupation_labels(const MappedModel& model) {
  const Mapping m = model.mapping();
  std::vector<std::string> out;
  for (const auto spin : m.spins())
    for (int i = 0; i < model.spec.n_sites(); ++i)
      out.push_back("site_" + std::to_string(i) +
                    (spin ? "_" + std::string(to_string(*spin)) : std::string()));
  return out;
}

RunRecord evolve_and_record(const MappedModel& model, const StateRecipe& recipe,
                            const Schedule& schedule) {
  if (!(schedule.tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (schedule.n_steps < 0) throw std::invalid_argument("n_steps must be non-negative");

  RunRecord rec;
  QuditState psi = prepare_state(model, recipe, &rec.survival_probability, schedule.memory_budget);
  const TrotterPlan plan = group_terms(model, schedule.tau, schedule.n_steps);

  std::vector<DiagonalGenerator> number_ops;
  for (const auto& op : occupation_operators(model)) {
    auto d = compile_diagonal(op, model.n_qudits());
    if (!d) throw std::logic_error("occupation operator is not diagonal");
    number_ops.push_back(std::move(*d));
  }
  rec.columns = occupation_labels(model);

  // oracle in the particle-number sector of the initial state
  const FockState f0 = apply_recipe(recipe);
  const auto [n_up, n_down] = particle_numbers(f0, recipe.spec.n_sites());
  const FockBasis basis =
      FockBasis::with_numbers(recipe.spec.n_sites(), recipe.spinful, n_up, n_down);
  const FermionHamiltonian hf = build_fermion_hamiltonian(recipe.spec, model.params, basis);
  const ExactPropagator prop(hf);
  const VectorXc phi0 = project_onto(f0, basis);

  auto record = [&](int step) {
    const double t = step * schedule.tau;
    rec.times.push_back(t);
    rec.occupations.push_back(
        diagonal_expectations(psi, std::span<const DiagonalGenerator>(number_ops)));
    rec.exact_occupations.push_back(occupations(basis, step == 0 ? phi0 : prop.evolve(phi0, t)));
    double dn = 0.0;
    for (std::size_t k = 0; k < number_ops.size(); ++k)
      dn += std::abs(rec.occupations.back()[k] - rec.exact_occupations.back()[k]);
    rec.delta_n.push_back(dn);
    if (schedule.observer) schedule.observer(step, psi);
  };

  const auto passes = compile_step(plan);
  record(0);
  for (int step = 1; step <= schedule.n_steps; ++step) {
    apply_step(psi, passes);
    record(step);
  }
  return rec;
}

}  // namespace ququart
