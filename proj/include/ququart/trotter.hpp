#pragma once

#include "ququart/mappings.hpp"
#include "ququart/recipe.hpp"
#include "ququart/statevector.hpp"

#include <functional>
#include <string>
#include <vector>

namespace ququart {

/// Mutually commuting Hamiltonian terms executed as one product of
/// exponentials. Hopping terms compile to pair rotations, interaction terms to
/// one fused diagonal phase pass; anything else falls back to dense local
/// exponentials.
struct TrotterGroup {
  std::string label;  // hop_x_A, hop_x_B, hop_y_A, ..., interaction
  TermType type = TermType::HopX;
  int parity_class = 0;
  std::vector<OperatorSum> ops;
  std::vector<FlipGenerator> flips;
  std::vector<DiagonalGenerator> diagonals;
  std::vector<LocalTerm> fallback;

  bool empty() const { return ops.empty(); }
};

/// Slots in the canonical order hop_x (even, odd[, extra]), hop_y (even,
/// odd[, extra]), interaction. Empty slots are kept and skipped at run time.
struct TrotterPlan {
  int n_qudits = 0;
  std::vector<TrotterGroup> groups;
  double tau = 0.05;
  int n_steps = 0;

  int active_groups() const;
};

/// Throws std::logic_error if two terms of one group fail to commute.
TrotterPlan group_terms(const MappedModel& model, double tau = 0.05, int n_steps = 0);

/// e^{−iθ H_group}.
void apply_group(QuditState& state, const TrotterGroup& group, double theta);

/// Kernel sequence of one symmetrized step: ∏_{j=1..m} e^{−iH_jτ/2}
/// ∏_{j=m..1} e^{−iH_jτ/2}, with the two middle factors merged.
std::vector<FusedKernel> step_kernels(const TrotterPlan& plan);

/// step_kernels packed into cache-sized passes; reuse across steps.
std::vector<FusedPass<Complex>> compile_step(const TrotterPlan& plan,
                                             int block_qudits = kDefaultBlockQudits);
void apply_step(QuditState& state, std::span<const FusedPass<Complex>> passes);

/// compile_step followed by apply_step.
void second_order_step(QuditState& state, const TrotterPlan& plan);

/// Vacuum, projection onto the constraint sector, then the recipe factors.
/// Returns the state and writes the projection survival probability.
QuditState prepare_state(const MappedModel& model, const StateRecipe& recipe,
                         double* survival = nullptr, std::size_t budget = kDefaultMemoryBudget);

/// Occupation observables ordered like the oracle modes: spin-up sites
/// row-major, then spin-down sites.
std::vector<OperatorSum> occupation_operators(const MappedModel& model);
std::vector<std::string> occupation_labels(const MappedModel& model);

struct RunRecord {
  std::vector<double> times;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> occupations;        // [record][mode]
  std::vector<std::vector<double>> exact_occupations;  // [record][mode]
  std::vector<double> delta_n;
  double survival_probability = 1.0;
};

struct Schedule {
  double tau = 0.05;
  int n_steps = 0;
  std::size_t memory_budget = kDefaultMemoryBudget;
  /// Called after preparation (step 0) and after every step.
  std::function<void(int step, const QuditState&)> observer;
};

/// Throws std::invalid_argument if the recipe lattice differs from the model's.
RunRecord evolve_and_record(const MappedModel& model, const StateRecipe& recipe,
                            const Schedule& schedule);

}  // namespace ququart
