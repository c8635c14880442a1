#include "ququart/sector.hpp"

#include "ququart/fermion_oracle.hpp"
#include "ququart/recipe.hpp"
#include "ququart/statevector.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ququart {

std::vector<int> vacuum_levels(const Mapping& m) {
  std::vector<int> levels(static_cast<std::size_t>(m.layout().n_qudits()), 0);
  for (const auto s : enumerate_sites(m.spec())) {
    std::vector<QuditMonomial> bs;
    for (const auto spin : m.spins()) bs.push_back(vertex_operator(m, s, spin));
    // all B at a site share one qudit only within a layer; handle each qudit
    for (const auto& b : bs) {
      if (b.weight() != 1) throw std::logic_error("vertex operator is not single-qudit");
    }
    std::map<int, std::vector<const QuditMonomial*>> by_qudit;
    for (const auto& b : bs) by_qudit[b.factors()[0].first].push_back(&b);
    for (const auto& [q, group] : by_qudit) {
      int chosen = -1;
      for (int d = 0; d < 4 && chosen < 0; ++d) {
        bool ok = true;
        for (const auto* b : group) {
          const auto f = b->factors()[0].second;
          ok = ok && f.image(d) == d && std::abs(b->coefficient() * f.phase(d) - 1.0) < 1e-12;
        }
        if (ok) chosen = d;
      }
      if (chosen < 0) throw std::logic_error("no common +1 level for the vertex operators");
      levels[q] = chosen;
    }
  }
  return levels;
}

namespace {

StateRecipe calibration_recipe(MappingKind kind) {
  using K = FermionOp::Kind;
  StateRecipe r;
  r.name = "calibration";
  r.spec = LatticeSpec{2, 2, Boundary::Open};
  r.spinful = is_spinful(kind);
  const Site a{0, 0}, b{1, 0}, c{0, 1};
  if (r.spinful) {
    r.factors.push_back({{{1.0, FermionOp{K::PairCreation, a, b, Spin::Up}}}});
    r.factors.push_back({{{1.0, FermionOp{K::PairCreation, a, c, Spin::Down}}}});
  } else {
    r.factors.push_back({{{1.0, FermionOp{K::PairCreation, a, b, std::nullopt}}}});
  }
  return r;
}

constexpr int kMoments = 8;

}  // namespace

SectorCalibration calibrate_sector(MappingKind kind) {
  SectorCalibration out;
  out.kind = kind;
  if (!has_constraints(kind)) {
    out.sign = 1;
    return out;
  }
  const StateRecipe recipe = calibration_recipe(kind);
  const ModelParams params = is_spinful(kind) ? ModelParams{HubbardModel{1.0, 0.7}}
                                              : ModelParams{TVModel{1.0, 0.7}};

  // oracle moments
  const FockState f = apply_recipe(recipe);
  const FermionHamiltonian hf = build_fermion_hamiltonian(recipe.spec, params);
  std::array<double, kMoments> exact{};
  {
    VectorXc v = f.amplitudes;
    for (int k = 0; k < kMoments; ++k) {
      v = hf.matrix * v;
      exact[k] = f.amplitudes.dot(v).real();
    }
  }

  std::array<bool, 2> match{};
  for (int which = 0; which < 2; ++which) {
    const int s = which == 0 ? 1 : -1;
    const MappedModel model = build_hamiltonian(kind, recipe.spec, params, s);
    const Mapping m = model.mapping();
    QuditState psi = QuditState::product(vacuum_levels(m));
    try {
      out.survival[which] = project_constraints(psi, std::span<const OperatorSum>(model.constraints),
                                                std::span<const int>(model.sector_signs));
      for (const auto& factor : recipe.factors) {
        OperatorSum op;
        for (const auto& [c, fop] : factor.terms)
          op += fop ? c * qudit_operator(m, *fop) : OperatorSum::identity(c);
        apply_and_normalize(psi, op);
      }
    } catch (const std::runtime_error&) {
      out.moment_error[which] = std::numeric_limits<double>::infinity();
      continue;
    }
    double worst = 0.0;
    QuditState::Vector v = psi.amplitudes();
    for (int k = 0; k < kMoments; ++k) {
      v = apply_operator(model.hamiltonian, v, model.n_qudits());
      const double mk = psi.amplitudes().dot(v).real();
      worst = std::max(worst, std::abs(mk - exact[k]) / std::max(1.0, std::abs(exact[k])));
    }
    out.moment_error[which] = worst;
    match[which] = worst < 1e-8;
  }
  if (match[0] == match[1])
    throw std::logic_error("sector calibration for " + std::string(to_string(kind)) +
                           " is ambiguous: errors " + std::to_string(out.moment_error[0]) + ", " +
                           std::to_string(out.moment_error[1]));
  out.sign = match[0] ? 1 : -1;
  return out;
}

int physical_sector_sign(MappingKind kind) {
  static std::mutex mu;
  static std::map<MappingKind, int> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(kind); it != cache.end()) return it->second;
  }
  const int s = calibrate_sector(kind).sign;
  std::lock_guard lock(mu);
  cache[kind] = s;
  return s;
}

}  // namespace ququart
