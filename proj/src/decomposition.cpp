#include "ququart/decomposition.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ququart {

namespace {

constexpr double kHermTol = 1e-10;
constexpr double kSpectrumTol = 1e-9;

void require_hermitian(const MatrixXc& m, const char* what) {
  if (m.rows() != m.cols()) throw std::invalid_argument(std::string(what) + " is not square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
    throw std::invalid_argument(std::string(what) + " is not Hermitian");
}

// Eigenvectors in descending eigenvalue order with canonical bases inside
// degenerate eigenspaces.
struct CanonicalEigen {
  Eigen::VectorXd values;
  MatrixXc vectors;
};

CanonicalEigen canonical_eigen(const MatrixXc& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
  const Eigen::Index n = h.rows();
  CanonicalEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) out.values[k] = es.eigenvalues()[n - 1 - k];
  MatrixXc raw(n, n);
  for (Eigen::Index k = 0; k < n; ++k) raw.col(k) = es.eigenvectors().col(n - 1 - k);

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && std::abs(out.values[end] - out.values[start]) < kSpectrumTol) ++end;
    const Eigen::Index dim = end - start;
    const MatrixXc block = raw.middleCols(start, dim);
    const MatrixXc proj = block * block.adjoint();
    Eigen::Index found = 0;
    for (Eigen::Index j = 0; j < n && found < dim; ++j) {
      VectorXc v = proj.col(j);
      for (Eigen::Index k = 0; k < found; ++k) {
        const auto q = out.vectors.col(start + k);
        v -= q * q.dot(v);
      }
      const double norm = v.norm();
      if (norm < 1e-6) continue;
      v /= norm;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(v[i]) > 1e-9) {
          v *= std::conj(v[i]) / std::abs(v[i]);
          break;
        }
      }
      out.vectors.col(start + found) = v;
      ++found;
    }
    if (found != dim) throw std::logic_error("degenerate eigenspace basis is incomplete");
    start = end;
  }
  return out;
}

Eigen::VectorXd sorted_eigenvalues(const MatrixXc& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Matrix of a gate on `gate_qudits` embedded into the register `support`.
MatrixXc embed(const MatrixXc& g, std::span<const int> gate_qudits, std::span<const int> support) {
  const int k = static_cast<int>(support.size());
  const Eigen::Index dim = Eigen::Index{1} << (2 * k);
  std::vector<int> shift;
  for (int q : gate_qudits) {
    const auto it = std::find(support.begin(), support.end(), q);
    if (it == support.end()) throw std::invalid_argument("gate acts outside the support");
    shift.push_back(2 * (k - 1 - static_cast<int>(it - support.begin())));
  }
  const int m = static_cast<int>(gate_qudits.size());
  auto local = [&](Eigen::Index x) {
    Eigen::Index l = 0;
    for (int s : shift) l = (l << 2) | ((x >> s) & 3);
    return l;
  };
  auto with_local = [&](Eigen::Index x, Eigen::Index l) {
    for (int a = 0; a < m; ++a) {
      const Eigen::Index digit = (l >> (2 * (m - 1 - a))) & 3;
      x = (x & ~(Eigen::Index{3} << shift[a])) | (digit << shift[a]);
    }
    return x;
  };
  MatrixXc e = MatrixXc::Zero(dim, dim);
  for (Eigen::Index x = 0; x < dim; ++x) {
    const Eigen::Index lx = local(x);
    for (Eigen::Index ly = 0; ly < g.rows(); ++ly) e(with_local(x, ly), x) = g(ly, lx);
  }
  return e;
}

MatrixXc gamma_tilde_sum(int qudits) {
  const MatrixXc gt = gamma_tilde().matrix();
  const MatrixXc id = MatrixXc::Identity(4, 4);
  if (qudits == 1) return gt;
  return Eigen::kroneckerProduct(gt, id).eval() + Eigen::kroneckerProduct(id, gt).eval();
}

}  // namespace

ConjugationSolution solve_conjugation(const MatrixXc& a, const MatrixXc& d) {
  require_hermitian(a, "a");
  require_hermitian(d, "d");
  if (a.rows() != d.rows()) throw std::invalid_argument("a and d differ in size");
  if ((sorted_eigenvalues(a) - sorted_eigenvalues(d)).cwiseAbs().maxCoeff() > kSpectrumTol)
    throw std::invalid_argument("a and d have different spectra");
  const CanonicalEigen ea = canonical_eigen(a);
  const CanonicalEigen ed = canonical_eigen(d);
  return {ed.vectors * ea.vectors.adjoint(), a, d};
}

MatrixXc hermitian_exp(const MatrixXc& h, Complex c) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
  const VectorXc f = (c * es.eigenvalues().cast<Complex>()).array().exp().matrix();
  return es.eigenvectors() * f.asDiagonal() * es.eigenvectors().adjoint();
}

MatrixXc Gate::unitary(double theta) const {
  return rotation ? hermitian_exp(matrix, Complex(0.0, -theta * scale)) : matrix;
}

std::vector<int> Circuit::support() const {
  std::vector<int> s;
  for (const auto& g : gates) s.insert(s.end(), g.qudits.begin(), g.qudits.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

int Circuit::two_qudit_count() const {
  return static_cast<int>(std::count_if(gates.begin(), gates.end(),
                                        [](const Gate& g) { return g.qudits.size() == 2; }));
}

int Circuit::two_qudit_depth() const {
  std::vector<std::pair<int, int>> level;  // qudit → last layer
  auto get = [&](int q) {
    for (const auto& [k, v] : level)
      if (k == q) return v;
    return 0;
  };
  auto set = [&](int q, int v) {
    for (auto& [k, w] : level)
      if (k == q) {
        w = v;
        return;
      }
    level.emplace_back(q, v);
  };
  int depth = 0;
  for (const auto& g : gates) {
    if (g.qudits.size() < 2) continue;
    int layer = 0;
    for (int q : g.qudits) layer = std::max(layer, get(q));
    ++layer;
    for (int q : g.qudits) set(q, layer);
    depth = std::max(depth, layer);
  }
  return depth;
}

MatrixXc Circuit::unitary(double theta, std::span<const int> support) const {
  const Eigen::Index dim = Eigen::Index{1} << (2 * support.size());
  MatrixXc u = MatrixXc::Identity(dim, dim);
  for (const auto& g : gates) u = embed(g.unitary(theta), g.qudits, support) * u;
  return std::exp(Complex(0.0, -theta * phase_rate)) * u;
}

Circuit decompose_term(const OperatorSum& term, const std::string& label) {
  if (!term.is_hermitian()) throw std::invalid_argument("term is not Hermitian");
  Circuit c;
  c.label = label;
  std::vector<QuditMonomial> ms;
  for (const auto& m : term.terms()) {
    if (m.weight() == 0)
      c.phase_rate += m.coefficient().real();
    else
      ms.push_back(m);
  }
  if (ms.empty()) return c;

  bool simple = true;
  for (std::size_t i = 0; i < ms.size() && simple; ++i) {
    simple = ms[i].weight() <= 2;
    for (std::size_t j = i + 1; j < ms.size() && simple; ++j) simple = ms[i].commutes_with(ms[j]);
  }
  if (simple) {
    int k = 0;
    for (const auto& m : ms) {
      Gate g;
      g.name = "R" + std::to_string(++k);
      g.qudits = m.support();
      g.matrix = to_dense_on(OperatorSum(m), g.qudits);
      g.rotation = true;
      c.gates.push_back(std::move(g));
    }
    return c;
  }

  // a ⊗ b with b the factor shared by every monomial
  std::vector<int> common, differ;
  for (int q : term.support()) {
    const SiteFactor f0 = ms.front().factor_at(q);
    bool same = !f0.is_identity();
    for (const auto& m : ms) same = same && m.factor_at(q) == f0;
    (same ? common : differ).push_back(q);
  }
  if (differ.size() != 2 || common.empty() || common.size() > 2)
    throw std::invalid_argument("term has no two-qudit conjugation form");

  std::vector<QuditMonomial::Factor> bf;
  for (int q : common) bf.emplace_back(q, ms.front().factor_at(q));
  QuditMonomial b(1.0, bf);
  OperatorSum a;
  for (const auto& m : ms) {
    std::vector<QuditMonomial::Factor> af;
    for (int q : differ) af.emplace_back(q, m.factor_at(q));
    a += QuditMonomial(m.coefficient(), af);
  }
  MatrixXc bd = to_dense_on(OperatorSum(b), common);
  if ((bd - bd.adjoint()).cwiseAbs().maxCoeff() > kHermTol) {
    bd *= kI;
    a *= -kI;
  }
  const MatrixXc ad = to_dense_on(a, differ);
  require_hermitian(ad, "pair part of the term");

  const MatrixXc da = gamma_tilde_sum(2);
  const double amax = sorted_eigenvalues(ad).cwiseAbs().maxCoeff();
  const double scale = amax / 2.0;
  const ConjugationSolution ua = solve_conjugation(ad / scale, da);

  std::optional<ConjugationSolution> wb;
  MatrixXc rest = bd;  // single-qudit partner of the rotations
  if (common.size() == 2) {
    const MatrixXc db = Eigen::kroneckerProduct(gamma_tilde().matrix(), MatrixXc::Identity(4, 4));
    wb = solve_conjugation(bd, db);
    rest = gamma_tilde().matrix();
  }
  const bool vertical = common.size() == 2;
  const std::string uname = vertical ? "V" : "U";

  c.gates.push_back({uname, differ, ua.u, false, 1.0});
  if (wb) c.gates.push_back({"W", common, wb->u, false, 1.0});
  const MatrixXc gt = gamma_tilde().matrix();
  for (int k = 0; k < 2; ++k) {
    Gate r;
    r.name = "R" + std::to_string(k + 1);
    r.qudits = {differ[k], common.front()};
    r.matrix = Eigen::kroneckerProduct(gt, rest);
    r.rotation = true;
    r.scale = scale;
    c.gates.push_back(std::move(r));
  }
  c.gates.push_back({uname + "†", differ, ua.u.adjoint(), false, 1.0});
  if (wb) c.gates.push_back({"W†", common, wb->u.adjoint(), false, 1.0});
  return c;
}

std::string_view to_string(TemplateTerm t) {
  switch (t) {
    case TemplateTerm::HopX: return "hop_x";
    case TemplateTerm::HopY: return "hop_y";
    case TemplateTerm::Interaction: return "interaction";
  }
  return "?";
}

OperatorSum template_term(MappingKind kind, TemplateTerm term, std::optional<Spin> spin) {
  const LatticeSpec spec{2, 2, Boundary::Open};
  const ModelParams params = is_spinful(kind) ? ModelParams{HubbardModel{1.0, 1.0}}
                                              : ModelParams{TVModel{1.0, 1.0}};
  if (term != TemplateTerm::Interaction) Mapping(kind, spec).check_spin(spin);
  const MappedModel model = build_hamiltonian(kind, spec, params, 1);
  const Site origin{0, 0};
  for (const auto& t : model.terms) {
    switch (term) {
      case TemplateTerm::HopX:
        if (t.type == TermType::HopX && t.edge->from == origin && t.spin == spin) return t.op;
        break;
      case TemplateTerm::HopY:
        if (t.type == TermType::HopY && t.edge->from == origin && t.spin == spin) return t.op;
        break;
      case TemplateTerm::Interaction:
        if (t.type != TermType::Interaction) break;
        if (t.site && *t.site == origin) return t.op;
        if (t.edge && t.edge->from == origin && t.edge->orientation == Orientation::Horizontal)
          return t.op;
        break;
    }
  }
  throw std::logic_error("representative term not found");
}

Circuit circuit_template(MappingKind kind, TemplateTerm term, std::optional<Spin> spin) {
  if (kind == MappingKind::GeneralizedJW)
    throw std::invalid_argument("no local circuit templates for the Jordan-Wigner mapping");
  std::string label(to_string(term));
  if (spin) label += "_" + std::string(to_string(*spin));
  return decompose_term(template_term(kind, term, spin), label);
}

GateCountReport gate_count(MappingKind kind) {
  GateCountReport r;
  r.kind = kind;
  const Mapping m(kind, {2, 2, Boundary::Open});
  Circuit all;
  auto add = [&](TemplateTerm t, std::optional<Spin> spin, int& bucket) {
    const Circuit c = circuit_template(kind, t, spin);
    r.templates.push_back({c.label, c.two_qudit_count(), c.two_qudit_depth()});
    bucket += c.two_qudit_count();
    all.gates.insert(all.gates.end(), c.gates.begin(), c.gates.end());
  };
  for (const auto spin : m.spins()) add(TemplateTerm::HopX, spin, r.hop_x);
  for (const auto spin : m.spins()) add(TemplateTerm::HopY, spin, r.hop_y);
  add(TemplateTerm::Interaction, std::nullopt, r.interaction);
  r.total = r.hop_x + r.hop_y + r.interaction;
  r.depth = all.two_qudit_depth();
  return r;
}

int hopping_weight(MappingKind kind, const LatticeSpec& spec, Orientation o) {
  const ModelParams params = is_spinful(kind) ? ModelParams{HubbardModel{1.0, 1.0}}
                                              : ModelParams{TVModel{1.0, 1.0}};
  const MappedModel model = build_hamiltonian(kind, spec, params, 1);
  const TermType type = o == Orientation::Horizontal ? TermType::HopX : TermType::HopY;
  int w = 0;
  for (const auto& t : model.terms)
    if (t.type == type) w = std::max(w, t.op.max_weight());
  return w;
}

namespace {

std::string fraction(int num, int den) {
  const int g = std::gcd(num, den);
  num /= g;
  den /= g;
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

const char* method_name(MappingKind kind) {
  switch (kind) {
    case MappingKind::SpinlessLocal: return "Spinless local";
    case MappingKind::SpinSplit: return "Local spin split";
    case MappingKind::AuxiliaryParity: return "Spinful auxiliary parity";
    case MappingKind::GeneralizedJW: return "Generalized JW (qudit)";
  }
  return "?";
}

}  // namespace

std::vector<WeightRow> weight_table(int lx, int ly) {
  const LatticeSpec spec{lx, ly, Boundary::Open};
  std::vector<WeightRow> rows;
  for (auto kind : {MappingKind::SpinlessLocal, MappingKind::GeneralizedJW, MappingKind::SpinSplit,
                    MappingKind::AuxiliaryParity}) {
    const ModelParams params = is_spinful(kind) ? ModelParams{HubbardModel{1.0, 1.0}}
                                                : ModelParams{TVModel{1.0, 1.0}};
    const MappedModel model = build_hamiltonian(kind, spec, params, 1);
    WeightRow row;
    row.method = method_name(kind);
    row.d = 4;
    const int modes = spec.n_sites() * (is_spinful(kind) ? 2 : 1);
    row.ratio = fraction(model.n_qudits(), modes);
    for (const auto& t : model.terms) {
      const int w = t.op.max_weight();
      if (t.type == TermType::HopX) row.w_x = std::max(row.w_x, w);
      if (t.type == TermType::HopY) row.w_y = std::max(row.w_y, w);
      if (t.type == TermType::Interaction) row.w_int = std::max(row.w_int, w);
    }
    if (has_constraints(kind)) {
      row.w_g = 0;
      for (const auto& g : model.constraints) row.w_g = std::max(row.w_g, g.max_weight());
    }
    if (kind == MappingKind::GeneralizedJW)
      row.w_y_scaling = "O(L_x), measured at L_x = " + std::to_string(lx);
    rows.push_back(std::move(row));
  }
  rows.push_back({"JW (qubit)", 2, "1", 2, -1, 2, -1, "O(L_x)", true});
  rows.push_back({"BVC (qubit)", 2, "2", 3, 4, 2, 6, "", true});
  return rows;
}

namespace {

std::string cell(int w) { return w < 0 ? "N/A" : std::to_string(w); }

std::string w_y_cell(const WeightRow& r, bool markdown) {
  if (r.w_y < 0) return r.w_y_scaling;
  if (r.w_y_scaling.empty()) return std::to_string(r.w_y);
  return std::to_string(r.w_y) + (markdown ? " (" + r.w_y_scaling + ")" : "");
}

}  // namespace

std::string gate_count_markdown(const std::vector<GateCountReport>& reports) {
  std::ostringstream os;
  os << "| mapping | hop_x | hop_y | interaction | total | depth |\n";
  os << "|---|---|---|---|---|---|\n";
  for (const auto& r : reports)
    os << "| " << to_string(r.kind) << " | " << r.hop_x << " | " << r.hop_y << " | "
       << r.interaction << " | " << r.total << " | " << r.depth << " |\n";
  return os.str();
}

std::string gate_count_csv(const std::vector<GateCountReport>& reports) {
  std::ostringstream os;
  os << "mapping,hop_x,hop_y,interaction,total,depth\n";
  for (const auto& r : reports)
    os << to_string(r.kind) << ',' << r.hop_x << ',' << r.hop_y << ',' << r.interaction << ','
       << r.total << ',' << r.depth << '\n';
  return os.str();
}

std::string weight_table_markdown(const std::vector<WeightRow>& rows) {
  std::ostringstream os;
  os << "| method | d | ratio | W_x | W_y | W_int | W_g | source |\n";
  os << "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows)
    os << "| " << r.method << " | " << r.d << " | " << r.ratio << " | " << cell(r.w_x) << " | "
       << w_y_cell(r, true) << " | " << cell(r.w_int) << " | " << cell(r.w_g) << " | "
       << (r.reference_only ? "reference" : "computed") << " |\n";
  return os.str();
}

std::string weight_table_csv(const std::vector<WeightRow>& rows) {
  std::ostringstream os;
  os << "method,d,ratio,w_x,w_y,w_y_scaling,w_int,w_g,source\n";
  for (const auto& r : rows)
    os << '"' << r.method << "\"," << r.d << ',' << r.ratio << ',' << cell(r.w_x) << ','
       << (r.w_y < 0 ? "N/A" : std::to_string(r.w_y)) << ",\"" << r.w_y_scaling << "\","
       << cell(r.w_int) << ',' << cell(r.w_g) << ','
       << (r.reference_only ? "reference" : "computed") << '\n';
  return os.str();
}

}  // namespace ququart
