#include "ququart/toric.hpp"

#include "ququart/sector.hpp"
#include "ququart/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ququart {

char to_char(Pauli p) {
  constexpr char kChars[] = {'i', 'x', 'y', 'z'};
  return kChars[static_cast<int>(p)];
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -kI, kI, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

namespace {

constexpr Pauli kPaulis[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

// a·b = phase·c
std::pair<Complex, Pauli> pauli_product(Pauli a, Pauli b) {
  if (a == Pauli::I) return {1.0, b};
  if (b == Pauli::I) return {1.0, a};
  if (a == b) return {1.0, Pauli::I};
  const int ia = static_cast<int>(a), ib = static_cast<int>(b);
  const auto c = static_cast<Pauli>(6 - ia - ib);
  // XY = iZ, YZ = iX, ZX = iY
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? kI : -kI, c};
}

MatrixXc word_matrix(std::span<const Pauli> word) {
  MatrixXc m = MatrixXc::Identity(1, 1);
  for (Pauli p : word) {
    const Eigen::Matrix2cd s = pauli_matrix(p);
    MatrixXc next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) next.block<2, 2>(2 * r, 2 * c) = m(r, c) * s;
    m = std::move(next);
  }
  return m;
}

// M = phase · P for a Pauli word P over k qubits, if such a word exists.
std::optional<std::pair<Complex, std::vector<Pauli>>> decompose_pauli(const MatrixXc& m, int k) {
  std::vector<Pauli> word(static_cast<std::size_t>(k), Pauli::I);
  const int count = 1 << (2 * k);
  const double dim = static_cast<double>(1 << k);
  for (int code = 0; code < count; ++code) {
    for (int q = 0; q < k; ++q) word[q] = kPaulis[(code >> (2 * (k - 1 - q))) & 3];
    const Complex c = (word_matrix(word).adjoint() * m).trace() / dim;
    if (std::abs(c) > 0.5) {
      if (std::abs(std::abs(c) - 1.0) > 1e-9) return std::nullopt;
      // snap to the exact phase
      Complex snapped(std::round(c.real() * 1e12) / 1e12, std::round(c.imag() * 1e12) / 1e12);
      return std::pair{snapped, word};
    }
  }
  return std::nullopt;
}

}  // namespace

PauliPair pauli_pair(SiteFactor f) {
  const Matrix4c& m = f.matrix();
  const auto d = decompose_pauli(MatrixXc(m), 2);
  if (!d) throw std::logic_error("site factor is not a Pauli pair");
  return {d->first, d->second[0], d->second[1]};
}

StabilizerOperator::StabilizerOperator(Complex phase, std::vector<std::pair<QubitRef, Pauli>> word)
    : phase_(phase) {
  std::map<int, Pauli> acc;
  for (const auto& [q, p] : word) {
    if (q.slot != 1 && q.slot != 2) throw std::invalid_argument("qubit slot must be 1 or 2");
    auto& cur = acc.try_emplace(q.index(), Pauli::I).first->second;
    const auto [ph, r] = pauli_product(cur, p);
    phase_ *= ph;
    cur = r;
  }
  for (const auto& [q, p] : acc)
    if (p != Pauli::I) entries_.emplace_back(q, p);
}

StabilizerOperator StabilizerOperator::from_monomial(const QuditMonomial& m) {
  Complex phase = m.coefficient();
  std::vector<std::pair<QubitRef, Pauli>> word;
  for (const auto& [q, f] : m.factors()) {
    const PauliPair pp = pauli_pair(f);
    phase *= pp.phase;
    word.push_back({{q, 1}, pp.first});
    word.push_back({{q, 2}, pp.second});
  }
  return StabilizerOperator(phase, std::move(word));
}

Pauli StabilizerOperator::at(QubitRef q) const {
  const int idx = q.index();
  for (const auto& [i, p] : entries_)
    if (i == idx) return p;
  return Pauli::I;
}

StabilizerOperator StabilizerOperator::slot_part(int slot) const {
  StabilizerOperator out;
  for (const auto& e : entries_)
    if (QubitRef::from_index(e.first).slot == slot) out.entries_.push_back(e);
  return out;
}

bool StabilizerOperator::is_hermitian() const {
  return std::abs(phase_.imag()) < 1e-12;
}

bool StabilizerOperator::commutes_with(const StabilizerOperator& o) const {
  int clashes = 0;
  auto a = entries_.begin();
  auto b = o.entries_.begin();
  while (a != entries_.end() && b != o.entries_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      clashes += a->second != b->second ? 1 : 0;
      ++a;
      ++b;
    }
  }
  return clashes % 2 == 0;
}

StabilizerOperator StabilizerOperator::adjoint() const {
  StabilizerOperator out = *this;
  out.phase_ = std::conj(phase_);
  return out;
}

SparseMatrixc StabilizerOperator::to_sparse(int n_qudits) const {
  const int nq = 2 * n_qudits;
  const Eigen::Index dim = Eigen::Index{1} << nq;
  Eigen::Index flip = 0;
  for (const auto& [q, p] : entries_)
    if (p == Pauli::X || p == Pauli::Y) flip |= Eigen::Index{1} << (nq - 1 - q);
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index x = 0; x < dim; ++x) {
    Complex v = phase_;
    for (const auto& [q, p] : entries_) {
      const bool bit = (x >> (nq - 1 - q)) & 1;
      if (p == Pauli::Z && bit) v = -v;
      if (p == Pauli::Y) v *= bit ? -kI : kI;
    }
    trips.emplace_back(x ^ flip, x, v);
  }
  SparseMatrixc m(dim, dim);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

MatrixXc StabilizerOperator::to_dense(int n_qudits, int cap) const {
  if (n_qudits > cap) throw std::invalid_argument("too many qudits for a dense matrix");
  return MatrixXc(to_sparse(n_qudits));
}

std::string StabilizerOperator::to_string(const LatticeSpec& spec) const {
  std::string out;
  const double re = phase_.real(), im = phase_.imag();
  if (std::abs(im) < 1e-12) {
    if (re < 0) out = "-";
  } else {
    out = im > 0 ? "i " : "-i ";
  }
  bool first = true;
  for (const auto& [q, p] : entries_) {
    const QubitRef r = QubitRef::from_index(q);
    if (!first) out += ' ';
    first = false;
    out += "σ^{";
    out += to_char(p);
    out += "," + std::to_string(r.slot) + "}_" + ququart::to_string(spec.site(r.qudit % spec.n_sites()));
    if (r.qudit >= spec.n_sites()) out += "'";
  }
  return first ? out + "I" : out;
}

StabilizerOperator operator*(const StabilizerOperator& a, const StabilizerOperator& b) {
  std::vector<std::pair<QubitRef, Pauli>> word;
  for (const auto& [q, p] : a.entries_) word.push_back({QubitRef::from_index(q), p});
  for (const auto& [q, p] : b.entries_) word.push_back({QubitRef::from_index(q), p});
  return StabilizerOperator(a.phase_ * b.phase_, std::move(word));
}

bool operator==(const StabilizerOperator& a, const StabilizerOperator& b) {
  return a.entries_ == b.entries_ && std::abs(a.phase_ - b.phase_) < 1e-12;
}

void QubitCircuit::append(const QubitCircuit& c) {
  gates_.insert(gates_.end(), c.gates_.begin(), c.gates_.end());
}

StabilizerOperator QubitCircuit::conjugate(const StabilizerOperator& p) const {
  StabilizerOperator cur = p;
  for (const auto& g : gates_) {
    const int k = static_cast<int>(g.qubits.size());
    std::vector<Pauli> local;
    for (const auto& q : g.qubits) local.push_back(cur.at(q));
    if (std::all_of(local.begin(), local.end(), [](Pauli x) { return x == Pauli::I; })) continue;
    const MatrixXc m = g.matrix * word_matrix(local) * g.matrix.adjoint();
    const auto d = decompose_pauli(m, k);
    if (!d) throw std::domain_error("gate " + g.name + " is not Clifford on this operator");
    std::vector<std::pair<QubitRef, Pauli>> word;
    for (const auto& [q, x] : cur.entries_) {
      const QubitRef r = QubitRef::from_index(q);
      if (std::find(g.qubits.begin(), g.qubits.end(), r) == g.qubits.end()) word.push_back({r, x});
    }
    for (int a = 0; a < k; ++a) word.push_back({g.qubits[a], d->second[a]});
    cur = StabilizerOperator(cur.phase_ * d->first, std::move(word));
  }
  return cur;
}

SparseMatrixc QubitCircuit::to_sparse(int n_qudits) const {
  const int nq = 2 * n_qudits;
  const Eigen::Index dim = Eigen::Index{1} << nq;
  SparseMatrixc total(dim, dim);
  total.setIdentity();
  for (const auto& g : gates_) {
    const int k = static_cast<int>(g.qubits.size());
    std::vector<int> pos;
    Eigen::Index mask = 0;
    for (const auto& q : g.qubits) {
      pos.push_back(nq - 1 - q.index());
      mask |= Eigen::Index{1} << pos.back();
    }
    std::vector<Eigen::Triplet<Complex>> trips;
    for (Eigen::Index x = 0; x < dim; ++x) {
      int in = 0;
      for (int a = 0; a < k; ++a) in = (in << 1) | static_cast<int>((x >> pos[a]) & 1);
      for (int out = 0; out < (1 << k); ++out) {
        const Complex v = g.matrix(out, in);
        if (v == Complex{}) continue;
        Eigen::Index y = x & ~mask;
        for (int a = 0; a < k; ++a) y |= Eigen::Index{(out >> (k - 1 - a)) & 1} << pos[a];
        trips.emplace_back(y, x, v);
      }
    }
    SparseMatrixc gm(dim, dim);
    gm.setFromTriplets(trips.begin(), trips.end());
    total = SparseMatrixc(gm * total);
  }
  return total;
}

int QubitCircuit::two_qubit_count() const {
  return static_cast<int>(
      std::count_if(gates_.begin(), gates_.end(), [](const QubitGate& g) { return g.qubits.size() == 2; }));
}

const ToricGateSet& toric_gate_set() {
  static const ToricGateSet set = [] {
    ToricGateSet s;
    const double r2 = 1.0 / std::sqrt(2.0);
    s.h << r2, r2, r2, -r2;
    s.s << 1, 0, 0, kI;
    s.r << r2, kI * r2, kI * r2, r2;
    s.r_dagger = s.r.adjoint();
    s.cz = Eigen::Matrix4cd::Identity();
    s.cz(3, 3) = -1;
    s.cnot.setZero();
    s.cnot(0, 0) = s.cnot(1, 1) = s.cnot(2, 3) = s.cnot(3, 2) = 1;
    return s;
  }();
  return set;
}

QubitGate make_gate(const std::string& name, std::vector<QubitRef> qubits) {
  const auto& s = toric_gate_set();
  QubitGate g{name, std::move(qubits), {}};
  std::size_t arity = 1;
  if (name == "H") g.matrix = s.h;
  else if (name == "S") g.matrix = s.s;
  else if (name == "R") g.matrix = s.r;
  else if (name == "Rdg") g.matrix = s.r_dagger;
  else if (name == "CZ") g.matrix = s.cz, arity = 2;
  else if (name == "CNOT") g.matrix = s.cnot, arity = 2;
  else throw std::invalid_argument("unknown gate '" + name + "'");
  if (g.qubits.size() != arity)
    throw std::invalid_argument("gate " + name + " takes " + std::to_string(arity) + " qubit(s)");
  for (const auto& q : g.qubits)
    if (q.slot != 1 && q.slot != 2) throw std::invalid_argument("qubit slot must be 1 or 2");
  if (arity == 2 && g.qubits[0] == g.qubits[1])
    throw std::invalid_argument("gate " + name + " acts twice on one qubit");
  return g;
}

QubitCircuit cnot_layer(int n_qudits) {
  QubitCircuit c;
  for (int q = 0; q < n_qudits; ++q) c.append(make_gate("CNOT", {{q, 1}, {q, 2}}));
  return c;
}

StabilizerOperator cnot_conjugate(const Mapping& m, const Plaquette& p) {
  if (m.kind() != MappingKind::SpinlessLocal)
    throw std::invalid_argument("the qubit-pair form is defined for the spinless mapping only");
  const auto g = StabilizerOperator::from_monomial(plaquette_constraint(m, p));
  return cnot_layer(m.layout().n_qudits()).conjugate(g);
}

VvcLayout default_vvc_layout(const LatticeSpec& spec) {
  VvcLayout out;
  VvcLayer v2{"V2", {}}, v3{"V3", {}}, v4{"V4", {}}, v5{"V5", {}}, v6{"V6", {}};
  for (const Site s : enumerate_sites(spec)) {
    if ((s.x + s.y) % 2 == 0) {
      v2.gates.push_back({"R", s, 1, std::nullopt, 1});
    } else {
      v3.gates.push_back({"H", s, 1, std::nullopt, 1});
      v4.gates.push_back({"S", s, 1, std::nullopt, 1});
    }
    if (s.y + 1 < spec.ly) v6.gates.push_back({"CZ", s, 2, Site{s.x, s.y + 1}, 2});
  }
  out.layers = {v2, v3, v4, v5, v6};
  return out;
}

QubitCircuit build_vvc(const Mapping& m, const VvcLayout& layout) {
  if (m.kind() != MappingKind::SpinlessLocal)
    throw std::invalid_argument("V^VC is defined for the spinless mapping only");
  if (m.layout().n_qudits() > kToricDenseCap)
    throw std::invalid_argument("lattice too large for dense verification (" +
                                std::to_string(m.layout().n_qudits()) + " ququarts, cap " +
                                std::to_string(kToricDenseCap) + ")");
  QubitCircuit c;
  for (const auto& layer : layout.layers) {
    for (const auto& gp : layer.gates) {
      auto where = [&](Site s) {
        if (!m.spec().contains(s))
          throw std::invalid_argument("layer " + layer.name + ": site " + to_string(s) +
                                      " is off the lattice");
        return m.layout().qudit(s);
      };
      std::vector<QubitRef> qs{{where(gp.site), gp.slot}};
      if (gp.target_site) qs.push_back({where(*gp.target_site), gp.target_slot});
      c.append(make_gate(gp.gate, std::move(qs)));
    }
  }
  return c;
}

VacuumCertificate vacuum_prepare(const MappedModel& model, std::size_t budget) {
  if (model.kind != MappingKind::SpinlessLocal && model.kind != MappingKind::SpinSplit)
    throw std::invalid_argument("vacuum preparation supports the spinless and spin-split mappings");
  const Mapping m = model.mapping();
  VacuumCertificate cert{QuditState::product(vacuum_levels(m), budget), {}, {}, {}, {}, 0.0, 0.0, 0.0};
  cert.survival_probability =
      project_constraints(cert.state, std::span<const OperatorSum>(model.constraints),
                          std::span<const int>(model.sector_signs));
  cert.labels = model.constraint_labels;
  cert.sector_signs = model.sector_signs;
  for (std::size_t p = 0; p < model.constraints.size(); ++p) {
    const double e = expectation_real(cert.state, model.constraints[p]);
    cert.expectations.push_back(e);
    cert.max_constraint_error =
        std::max(cert.max_constraint_error, std::abs(e - model.sector_signs[p]));
  }
  for (const auto& n : occupation_operators(model))
    cert.occupations.push_back(expectation_real(cert.state, n));
  cert.energy = expectation_real(cert.state, model.hamiltonian);
  return cert;
}

}  // namespace ququart
