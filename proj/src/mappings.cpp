#include "ququart/mappings.hpp"

#include "ququart/sector.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace ququart {

std::string_view to_string(MappingKind kind) {
  switch (kind) {
    case MappingKind::SpinlessLocal: return "spinless";
    case MappingKind::SpinSplit: return "spin_split";
    case MappingKind::AuxiliaryParity: return "auxiliary_parity";
    case MappingKind::GeneralizedJW: return "generalized_jw";
  }
  return "?";
}

std::string_view to_string(Spin spin) { return spin == Spin::Up ? "up" : "down"; }

std::optional<MappingKind> parse_mapping_kind(std::string_view name) {
  for (auto k : {MappingKind::SpinlessLocal, MappingKind::SpinSplit, MappingKind::AuxiliaryParity,
                 MappingKind::GeneralizedJW})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

bool is_spinful(MappingKind kind) { return kind != MappingKind::SpinlessLocal; }
bool has_constraints(MappingKind kind) { return kind != MappingKind::GeneralizedJW; }

QuditLayout::QuditLayout(const LatticeSpec& spec, int layers) : spec_(spec), layers_(layers) {
  spec.validate();
  if (layers < 1 || layers > 2) throw std::invalid_argument("layout supports one or two layers");
}

QuditLayout QuditLayout::for_kind(MappingKind kind, const LatticeSpec& spec) {
  const bool two = kind == MappingKind::SpinSplit || kind == MappingKind::AuxiliaryParity;
  return QuditLayout(spec, two ? 2 : 1);
}

int QuditLayout::qudit(Site s, Layer layer) const {
  if (!spec_.contains(s)) throw std::out_of_range("site " + to_string(s) + " is off the lattice");
  const int l = layer == Layer::Physical ? 0 : 1;
  if (l >= layers_) throw std::out_of_range("layout has no primed layer");
  return l * spec_.n_sites() + spec_.index(s);
}

Mapping::Mapping(MappingKind kind, const LatticeSpec& spec)
    : kind_(kind), layout_(QuditLayout::for_kind(kind, spec)) {}

std::vector<std::optional<Spin>> Mapping::spins() const {
  if (!is_spinful(kind_)) return {std::nullopt};
  return {Spin::Up, Spin::Down};
}

void Mapping::check_spin(std::optional<Spin> spin) const {
  if (is_spinful(kind_) && !spin)
    throw std::invalid_argument(std::string(to_string(kind_)) + " needs a spin label");
  if (!is_spinful(kind_) && spin)
    throw std::invalid_argument("spinless mapping takes no spin label");
}

namespace {

using F = QuditMonomial::Factor;

SiteFactor g(int mu) { return gamma(mu); }
SiteFactor gt() { return gamma_tilde(); }

// (Γa, Γb) pair carrying a spin species on a shared qudit.
std::pair<int, int> spin_pair(std::optional<Spin> spin) {
  return spin == Spin::Down ? std::pair{3, 4} : std::pair{1, 2};
}

void check_edge(const Mapping& m, const Edge& e) {
  const Edge f = e.forward();
  const Edge expected = edge_at(m.spec(), f.from, f.orientation);
  if (!(expected.to == f.to)) throw std::invalid_argument("edge " + to_string(e) + " is not on the lattice");
}

QuditMonomial forward_edge_operator(const Mapping& m, const Edge& e, std::optional<Spin> spin) {
  const auto& lay = m.layout();
  const bool horizontal = e.orientation == Orientation::Horizontal;
  switch (m.kind()) {
    case MappingKind::SpinlessLocal:
    case MappingKind::SpinSplit: {
      const Layer layer = spin == Spin::Down ? Layer::Primed : Layer::Physical;
      const int a = lay.qudit(e.from, layer);
      const int b = lay.qudit(e.to, layer);
      return horizontal ? QuditMonomial(1.0, {F{a, g(1)}, F{b, g(2)}})
                        : QuditMonomial(1.0, {F{a, g(3)}, F{b, g(4)}});
    }
    case MappingKind::AuxiliaryParity: {
      const auto [ga, gb] = spin_pair(spin);
      const int r = lay.qudit(e.from);
      const int s = lay.qudit(e.to);
      const int rp = lay.qudit(e.from, Layer::Primed);
      const int sp = lay.qudit(e.to, Layer::Primed);
      if (horizontal)
        return QuditMonomial(-kI, {F{r, gt()}, F{rp, gt()}, F{r, g(gb)}, F{s, g(gb)}});
      return QuditMonomial(
          1.0, {F{r, gt()}, F{s, gt()}, F{r, g(gb)}, F{s, g(gb)}, F{rp, g(ga)}, F{sp, g(gb)}});
    }
    case MappingKind::GeneralizedJW: {
      const auto& spec = m.spec();
      const auto a = jwt_majoranas(spec, spec.index(e.from), *spin);
      const auto b = jwt_majoranas(spec, spec.index(e.to), *spin);
      return -kI * (a.gamma * b.gamma);
    }
  }
  throw std::logic_error("unknown mapping kind");
}

}  // namespace

QuditMonomial edge_operator(const Mapping& m, const Edge& e, std::optional<Spin> spin) {
  m.check_spin(spin);
  check_edge(m, e);
  const QuditMonomial a = forward_edge_operator(m, e.forward(), spin);
  return e.reversed ? Complex(-1.0) * a : a;
}

QuditMonomial vertex_operator(const Mapping& m, Site s, std::optional<Spin> spin) {
  m.check_spin(spin);
  const auto& lay = m.layout();
  switch (m.kind()) {
    case MappingKind::SpinlessLocal:
    case MappingKind::SpinSplit:
      return QuditMonomial::single(
          lay.qudit(s, spin == Spin::Down ? Layer::Primed : Layer::Physical), gt());
    case MappingKind::AuxiliaryParity:
    case MappingKind::GeneralizedJW: {
      const auto [ga, gb] = spin_pair(spin);
      const int q = lay.qudit(s);
      return QuditMonomial(kI, {F{q, g(ga)}, F{q, g(gb)}});
    }
  }
  throw std::logic_error("unknown mapping kind");
}

OperatorSum hopping_sum(const Mapping& m, const Edge& e, std::optional<Spin> spin) {
  const OperatorSum a = edge_operator(m, e, spin);
  const OperatorSum bi = vertex_operator(m, e.from, spin);
  const OperatorSum bj = vertex_operator(m, e.to, spin);
  return kI * (a * (bi - bj));
}

OperatorSum pair_creation(const Mapping& m, const Edge& e, std::optional<Spin> spin) {
  const OperatorSum a = edge_operator(m, e, spin);
  const OperatorSum one = OperatorSum::identity();
  const OperatorSum bi = vertex_operator(m, e.from, spin);
  const OperatorSum bj = vertex_operator(m, e.to, spin);
  return (kI / 4.0) * (a * (one + bi) * (one + bj));
}

OperatorSum number_operator(const Mapping& m, Site s, std::optional<Spin> spin) {
  return 0.5 * (OperatorSum::identity() - OperatorSum(vertex_operator(m, s, spin)));
}

QuditMonomial loop_operator(const Mapping& m, std::span<const Edge> loop, std::optional<Spin> spin) {
  Complex c = 1.0;
  for (std::size_t k = 0; k < loop.size(); ++k) c *= kI;
  QuditMonomial out(c);
  for (const auto& e : loop) out = out * edge_operator(m, e, spin);
  return out;
}

QuditMonomial plaquette_constraint(const Mapping& m, const Plaquette& p, std::optional<Spin> spin) {
  if (!has_constraints(m.kind()))
    throw std::invalid_argument("the Jordan-Wigner construction has no plaquette constraints");
  return loop_operator(m, p.cycle, spin);
}

QuditMonomial polyakov_constraint(const Mapping& m, const PolyakovLoop& loop,
                                  std::optional<Spin> spin) {
  if (m.spec().boundary != Boundary::Periodic)
    throw std::invalid_argument("Polyakov loops need a periodic lattice");
  if (!has_constraints(m.kind()))
    throw std::invalid_argument("the Jordan-Wigner construction has no loop constraints");
  return loop_operator(m, loop.edges, spin);
}

MajoranaPair jwt_majoranas(const LatticeSpec& spec, int site_index, Spin spin) {
  spec.validate();
  if (site_index < 0 || site_index >= spec.n_sites())
    throw std::out_of_range("site index out of range");
  std::vector<F> string;
  for (int k = 0; k < site_index; ++k) string.emplace_back(k, gt());
  const auto [ga, gb] = spin_pair(spin);
  auto with = [&](int mu, Complex c) {
    auto fs = string;
    fs.emplace_back(site_index, g(mu));
    return QuditMonomial(c, fs);
  };
  return {with(ga, 1.0), with(gb, -1.0)};
}

LadderPair jwt_operators(const LatticeSpec& spec, int site_index, Spin spin) {
  const auto [gamma, gamma_prime] = jwt_majoranas(spec, site_index, spin);
  const OperatorSum a(gamma);
  const OperatorSum b(gamma_prime);
  return {0.5 * (a - kI * b), 0.5 * (a + kI * b)};
}

std::vector<QuditMonomial> constraint_generators(const Mapping& m,
                                                 std::vector<std::string>* labels) {
  std::vector<QuditMonomial> out;
  if (labels) labels->clear();
  if (!has_constraints(m.kind())) return out;
  auto tag = [](std::optional<Spin> spin) {
    return spin ? std::string(":") + std::string(to_string(*spin)) : std::string();
  };
  for (const auto spin : m.spins()) {
    for (const auto& p : plaquettes(m.spec())) {
      out.push_back(plaquette_constraint(m, p, spin));
      if (labels) labels->push_back("G" + to_string(p.corner) + tag(spin));
    }
  }
  if (m.spec().boundary == Boundary::Periodic) {
    for (const auto spin : m.spins()) {
      for (const auto& loop : polyakov_loops(m.spec())) {
        out.push_back(polyakov_constraint(m, loop, spin));
        if (labels)
          labels->push_back(std::string(loop.orientation == Orientation::Horizontal ? "Lrow" : "Lcol") +
                            std::to_string(loop.line) + tag(spin));
      }
    }
  }
  return out;
}

MappedModel build_hamiltonian(MappingKind kind, const LatticeSpec& spec, const ModelParams& params) {
  return build_hamiltonian(kind, spec, params, has_constraints(kind) ? physical_sector_sign(kind) : 1);
}

MappedModel build_hamiltonian(MappingKind kind, const LatticeSpec& spec, const ModelParams& params,
                              int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("sector sign must be +1 or -1");
  const bool tv = std::holds_alternative<TVModel>(params);
  if (tv && kind != MappingKind::SpinlessLocal)
    throw std::invalid_argument("the t-V model needs the spinless mapping");
  if (!tv && kind == MappingKind::SpinlessLocal)
    throw std::invalid_argument("the Fermi-Hubbard model needs a spinful mapping");

  const Mapping m(kind, spec);
  MappedModel model;
  model.spec = spec;
  model.kind = kind;
  model.layout = m.layout();
  model.params = params;

  const double hop = tv ? std::get<TVModel>(params).t : std::get<HubbardModel>(params).j;
  for (const auto spin : m.spins()) {
    for (const auto orientation : {Orientation::Horizontal, Orientation::Vertical}) {
      for (const auto& e : edges(spec, orientation)) {
        HamiltonianTerm t;
        t.type = orientation == Orientation::Horizontal ? TermType::HopX : TermType::HopY;
        t.parity_class = e.parity_class;
        t.spin = spin;
        t.edge = e;
        t.op = (-0.5 * hop) * hopping_sum(m, e, spin);
        model.terms.push_back(std::move(t));
      }
    }
  }
  if (tv) {
    const double v = std::get<TVModel>(params).v;
    for (const auto& e : all_edges(spec)) {
      HamiltonianTerm t;
      t.type = TermType::Interaction;
      t.edge = e;
      t.op = v * (number_operator(m, e.from) * number_operator(m, e.to));
      if (!t.op.empty()) model.terms.push_back(std::move(t));
    }
  } else {
    const double u = std::get<HubbardModel>(params).u;
    for (const auto s : enumerate_sites(spec)) {
      HamiltonianTerm t;
      t.type = TermType::Interaction;
      t.site = s;
      t.op = u * (number_operator(m, s, Spin::Up) * number_operator(m, s, Spin::Down));
      if (!t.op.empty()) model.terms.push_back(std::move(t));
    }
  }
  for (const auto& t : model.terms) model.hamiltonian += t.op;

  for (const auto& c : constraint_generators(m, &model.constraint_labels))
    model.constraints.emplace_back(c);
  model.sector_signs.assign(model.constraints.size(), sign);
  return model;
}

std::vector<TaggedOperator> rule_table_operators(const Mapping& m) {
  std::vector<TaggedOperator> out;
  const auto& spec = m.spec();
  auto mode = [&](Site s, std::optional<Spin> spin) {
    return spec.index(s) * 2 + (spin == Spin::Down ? 1 : 0);
  };
  auto suffix = [](std::optional<Spin> spin) {
    return spin ? std::string(spin == Spin::Up ? "^" : "v") : std::string();
  };
  for (const auto spin : m.spins()) {
    for (const auto& e : all_edges(spec)) {
      std::vector<int> modes{mode(e.from, spin), mode(e.to, spin)};
      out.push_back({"A" + to_string(e) + suffix(spin), modes, edge_operator(m, e, spin)});
    }
    for (const auto s : enumerate_sites(spec))
      out.push_back({"B" + to_string(s) + suffix(spin), {mode(s, spin)}, vertex_operator(m, s, spin)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Residual symmetries. A monomial's factor pattern is a vector over GF(2)
// with four bits per qudit; two patterns u, v commute iff
//   Σ_q  parity(u_q)·parity(v_q) + |u_q ∧ v_q|  is even.

namespace {

using Bits = std::uint64_t;

Bits pattern(const QuditMonomial& mono) {
  Bits b = 0;
  for (const auto& [q, f] : mono.factors()) b |= Bits{f.mask()} << (4 * q);
  return b;
}

int form(Bits u, Bits v, int n) {
  int s = 0;
  for (int q = 0; q < n; ++q) {
    const unsigned a = (u >> (4 * q)) & 0xF;
    const unsigned b = (v >> (4 * q)) & 0xF;
    s += (std::popcount(a) & 1) * (std::popcount(b) & 1) + std::popcount(a & b);
  }
  return s & 1;
}

// Row-reduced basis; insert() reports whether the vector was independent.
struct Gf2Span {
  std::vector<Bits> rows;
  bool insert(Bits v) {
    for (Bits r : rows) {
      const int lead = 63 - std::countl_zero(r);
      if ((v >> lead) & 1) v ^= r;
    }
    if (v == 0) return false;
    const int lead = 63 - std::countl_zero(v);
    for (Bits& r : rows)
      if ((r >> lead) & 1) r ^= v;
    rows.push_back(v);
    return true;
  }
  bool contains(Bits v) const {
    Gf2Span copy = *this;
    return !copy.insert(v);
  }
};

QuditMonomial hermitian_from_pattern(Bits b, int n) {
  std::vector<F> fs;
  for (int q = 0; q < n; ++q) {
    const auto mask = static_cast<std::uint8_t>((b >> (4 * q)) & 0xF);
    if (mask) fs.emplace_back(q, SiteFactor::from_mask(mask));
  }
  QuditMonomial mono(1.0, fs);
  return mono.adjoint().coefficient() == mono.coefficient() ? mono : kI * mono;
}

}  // namespace

std::vector<QuditMonomial> residual_symmetries(const Mapping& m,
                                               std::span<const QuditMonomial> constraints) {
  const int n = m.layout().n_qudits();
  if (n > 16) throw std::length_error("residual_symmetries is limited to 16 qudits");
  const int dim = 4 * n;

  std::vector<Bits> generators;
  Gf2Span algebra;
  for (const auto& t : rule_table_operators(m)) {
    generators.push_back(pattern(t.op));
    algebra.insert(pattern(t.op));
  }

  // Linear functionals v ↦ form(g, v); the commutant is their common kernel.
  std::vector<Bits> rows;
  for (Bits gvec : generators) {
    Bits r = 0;
    for (int q = 0; q < n; ++q) {
      const unsigned a = (gvec >> (4 * q)) & 0xF;
      const unsigned flip = (std::popcount(a) & 1) ? 0xFu : 0u;
      r |= Bits{(a ^ flip) & 0xF} << (4 * q);
    }
    rows.push_back(r);
  }
  // Gaussian elimination to reduced row echelon form.
  std::vector<int> pivot_of_col(dim, -1);
  int rank = 0;
  for (int col = 0; col < dim && rank < static_cast<int>(rows.size()); ++col) {
    int sel = -1;
    for (int i = rank; i < static_cast<int>(rows.size()); ++i)
      if ((rows[i] >> col) & 1) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[rank], rows[sel]);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i)
      if (i != rank && ((rows[i] >> col) & 1)) rows[i] ^= rows[rank];
    pivot_of_col[col] = rank++;
  }
  std::vector<Bits> kernel;
  for (int free = 0; free < dim; ++free) {
    if (pivot_of_col[free] >= 0) continue;
    Bits v = Bits{1} << free;
    for (int col = 0; col < dim; ++col)
      if (pivot_of_col[col] >= 0 && ((rows[pivot_of_col[col]] >> free) & 1)) v |= Bits{1} << col;
    kernel.push_back(v);
  }
  if (kernel.size() > 24) throw std::length_error("commutant too large to enumerate");

  std::vector<Bits> chosen;
  Gf2Span span = algebra;
  for (const auto& c : constraints) chosen.push_back(pattern(c));
  for (std::uint64_t sel = 1; sel < (std::uint64_t{1} << kernel.size()); ++sel) {
    Bits v = 0;
    for (std::size_t k = 0; k < kernel.size(); ++k)
      if ((sel >> k) & 1) v ^= kernel[k];
    if (span.contains(v)) continue;
    if (std::any_of(chosen.begin(), chosen.end(), [&](Bits c) { return form(c, v, n) != 0; }))
      continue;
    span.insert(v);
    chosen.push_back(v);
  }

  std::vector<QuditMonomial> out;
  for (std::size_t k = constraints.size(); k < chosen.size(); ++k)
    out.push_back(hermitian_from_pattern(chosen[k], n));
  return out;
}

}  // namespace ququart
