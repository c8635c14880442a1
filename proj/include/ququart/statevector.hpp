#pragma once

#include "ququart/gamma.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ququart {

inline constexpr std::size_t kDefaultMemoryBudget = std::size_t{1} << 30;

class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(std::size_t required, std::size_t budget)
      : std::runtime_error("statevector needs " + std::to_string(required) +
                           " bytes, budget is " + std::to_string(budget)),
        required_bytes(required),
        budget_bytes(budget) {}
  std::size_t required_bytes;
  std::size_t budget_bytes;
};

/// Dense ququart register. Qudit 0 is the most significant base-4 digit of
/// the amplitude index, so qudit q lives at bit offset 2·(n−1−q).
template <typename Scalar>
class BasicQuditState {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;

  static std::size_t required_bytes(int n) {
    if (n < 1 || n > 30) throw std::invalid_argument("qudit count out of range");
    return sizeof(Scalar) * (std::size_t{1} << (2 * n));
  }

  /// |0…0⟩. Throws BudgetExceeded when 4^n amplitudes would reach the budget.
  static BasicQuditState zero(int n, std::size_t budget = kDefaultMemoryBudget) {
    return product(std::vector<int>(static_cast<std::size_t>(std::max(n, 0)), 0), budget);
  }

  /// Product of computational basis levels, levels[q] ∈ {0,1,2,3}.
  static BasicQuditState product(std::span<const int> levels,
                                 std::size_t budget = kDefaultMemoryBudget) {
    const int n = static_cast<int>(levels.size());
    const std::size_t need = required_bytes(n);
    if (need >= budget) throw BudgetExceeded(need, budget);
    BasicQuditState s;
    s.n_ = n;
    s.amp_ = Vector::Zero(Eigen::Index{1} << (2 * n));
    Eigen::Index idx = 0;
    for (int q = 0; q < n; ++q) {
      if (levels[q] < 0 || levels[q] > 3) throw std::invalid_argument("level must be in 0..3");
      idx = (idx << 2) | levels[q];
    }
    s.amp_[idx] = Scalar(1);
    return s;
  }

  /// Wraps an amplitude vector; it must already be normalized.
  static BasicQuditState from_amplitudes(int n, Vector amplitudes) {
    if (amplitudes.size() != (Eigen::Index{1} << (2 * n)))
      throw std::invalid_argument("amplitude vector has wrong length");
    if (std::abs(amplitudes.norm() - Real(1)) > Real(1e-6))
      throw std::invalid_argument("amplitude vector is not normalized");
    BasicQuditState s;
    s.n_ = n;
    s.amp_ = std::move(amplitudes);
    return s;
  }

  int n_qudits() const { return n_; }
  Eigen::Index dim() const { return amp_.size(); }
  int shift(int qudit) const { return 2 * (n_ - 1 - qudit); }

  const Vector& amplitudes() const { return amp_; }
  Vector& amplitudes() { return amp_; }

 private:
  int n_ = 0;
  Vector amp_;
};

using QuditState = BasicQuditState<std::complex<double>>;

namespace detail {

inline constexpr Eigen::Index kReductionChunk = Eigen::Index{1} << 12;

inline void check_support(std::span<const int> support, int n) {
  for (std::size_t a = 0; a < support.size(); ++a) {
    if (support[a] < 0 || support[a] >= n) throw std::out_of_range("support qudit out of range");
    for (std::size_t b = a + 1; b < support.size(); ++b)
      if (support[a] == support[b]) throw std::invalid_argument("overlapping support indices");
  }
}

// Base-4 local index of x on the listed bit offsets, first offset most significant.
inline unsigned local_index(Eigen::Index x, std::span<const int> shifts) {
  unsigned l = 0;
  for (int s : shifts) l = (l << 2) | static_cast<unsigned>((x >> s) & 3);
  return l;
}

// Fixed-order sum over chunks of [0, dim): each chunk is reduced independently
// and the partials are added sequentially, so the result does not depend on
// the thread count.
template <typename T, typename Body>
T ordered_reduce(Eigen::Index dim, Body body) {
  const Eigen::Index n_chunks = (dim + kReductionChunk - 1) / kReductionChunk;
  std::vector<T> partial(static_cast<std::size_t>(n_chunks), T{});
#pragma omp parallel for schedule(static) if (n_chunks > 4)
  for (Eigen::Index c = 0; c < n_chunks; ++c) {
    const Eigen::Index lo = c * kReductionChunk;
    const Eigen::Index hi = std::min(dim, lo + kReductionChunk);
    T acc{};
    for (Eigen::Index x = lo; x < hi; ++x) acc += body(x);
    partial[static_cast<std::size_t>(c)] = acc;
  }
  T total{};
  for (const T& p : partial) total += p;
  return total;
}

/// A monomial reduced to an index XOR mask and a phase computed from digits.
struct CompiledMonomial {
  Eigen::Index flip = 0;
  Complex coefficient;
  std::vector<int> shifts;
  std::vector<std::array<std::uint8_t, 4>> exponent;  // phase(d) = i^exponent

  CompiledMonomial(const QuditMonomial& m, int n) : coefficient(m.coefficient()) {
    for (const auto& [q, f] : m.factors()) {
      if (q >= n) throw std::out_of_range("operator acts outside the register");
      const int s = 2 * (n - 1 - q);
      const int fl = f.image(0);
      std::array<std::uint8_t, 4> e{};
      for (int d = 0; d < 4; ++d) {
        if (f.image(d) != (d ^ fl)) throw std::logic_error("factor is not a Pauli-type permutation");
        const Complex p = f.phase(d);
        e[d] = p.real() > 0.5 ? 0 : p.imag() > 0.5 ? 1 : p.real() < -0.5 ? 2 : 3;
      }
      flip |= Eigen::Index{fl} << s;
      shifts.push_back(s);
      exponent.push_back(e);
    }
  }

  Complex phase(Eigen::Index x) const {
    static constexpr std::array<Complex, 4> pw{Complex(1, 0), Complex(0, 1), Complex(-1, 0),
                                               Complex(0, -1)};
    unsigned e = 0;
    for (std::size_t k = 0; k < shifts.size(); ++k) e += exponent[k][(x >> shifts[k]) & 3];
    return coefficient * pw[e & 3];
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Compiled generators. A Hermitian sum whose monomials all flip the same
// index bits couples amplitudes only in pairs (x, x^F), so its exponential is
// a 2×2 rotation per pair; a diagonal sum is a phase per amplitude.

struct FlipGenerator {
  Eigen::Index flip = 0;
  std::vector<int> shifts;
  std::vector<Complex> coupling;  // (Hψ)_x = coupling[local(x)] · ψ_{x^F}
};

struct DiagonalGenerator {
  std::vector<int> shifts;
  std::vector<double> values;  // (Hψ)_x = values[local(x)] · ψ_x
};

namespace detail {

inline std::vector<int> support_shifts(const OperatorSum& op, int n) {
  std::vector<int> s;
  for (int q : op.support()) {
    if (q >= n) throw std::out_of_range("operator acts outside the register");
    s.push_back(2 * (n - 1 - q));
  }
  return s;
}

// Inserts two zero bits at every listed offset (ascending) into t, giving the
// base index of the t-th block of amplitudes that differ only on those digits.
inline Eigen::Index deposit(Eigen::Index t, std::span<const int> ascending_shifts) {
  for (int s : ascending_shifts)
    t = ((t >> s) << (s + 2)) | (t & ((Eigen::Index{1} << s) - 1));
  return t;
}

// Scatter local digits back to a full index for evaluating compiled phases.
inline Eigen::Index spread(unsigned local, std::span<const int> shifts) {
  Eigen::Index x = 0;
  const int k = static_cast<int>(shifts.size());
  for (int a = 0; a < k; ++a) x |= Eigen::Index{(local >> (2 * (k - 1 - a))) & 3} << shifts[a];
  return x;
}

}  // namespace detail

/// Empty when the monomials do not share one nonzero flip pattern or the
/// support exceeds 6 qudits. Throws std::invalid_argument if not Hermitian.
inline std::optional<FlipGenerator> compile_flip(const OperatorSum& op, int n) {
  if (op.empty()) return std::nullopt;
  std::vector<detail::CompiledMonomial> cms;
  for (const auto& t : op.terms()) cms.emplace_back(t, n);
  const Eigen::Index flip = cms.front().flip;
  if (flip == 0) return std::nullopt;
  for (const auto& c : cms)
    if (c.flip != flip) return std::nullopt;
  FlipGenerator g;
  g.flip = flip;
  g.shifts = detail::support_shifts(op, n);
  if (g.shifts.size() > 6) return std::nullopt;
  const unsigned size = 1u << (2 * g.shifts.size());
  g.coupling.resize(size);
  for (unsigned l = 0; l < size; ++l) {
    const Eigen::Index y = detail::spread(l, g.shifts) ^ flip;
    Complex a{};
    for (const auto& c : cms) a += c.phase(y);
    g.coupling[l] = a;
  }
  const unsigned lflip = detail::local_index(flip, g.shifts);
  for (unsigned l = 0; l < size; ++l)
    if (std::abs(g.coupling[l ^ lflip] - std::conj(g.coupling[l])) > 1e-12)
      throw std::invalid_argument("flip generator is not Hermitian");
  return g;
}

/// Empty when op is not diagonal. Throws std::invalid_argument if not Hermitian.
inline std::optional<DiagonalGenerator> compile_diagonal(const OperatorSum& op, int n) {
  if (!op.is_diagonal()) return std::nullopt;
  DiagonalGenerator g;
  g.shifts = detail::support_shifts(op, n);
  if (g.shifts.size() > 8) return std::nullopt;
  std::vector<detail::CompiledMonomial> cms;
  for (const auto& t : op.terms()) cms.emplace_back(t, n);
  const unsigned size = 1u << (2 * g.shifts.size());
  g.values.resize(size);
  for (unsigned l = 0; l < size; ++l) {
    const Eigen::Index x = detail::spread(l, g.shifts);
    Complex v{};
    for (const auto& c : cms) v += c.phase(x);
    if (std::abs(v.imag()) > 1e-12) throw std::invalid_argument("diagonal generator is not Hermitian");
    g.values[l] = v.real();
  }
  return g;
}

namespace detail {

// Prepared kernels act on a raw array of amplitudes. Amplitudes that differ
// only on the support digits form a group; groups are visited so that the
// innermost loop runs over the contiguous index range below the lowest
// support digit. Visiting one group at a time instead would touch 4^k rows a
// power of two apart and thrash the cache sets.

inline constexpr Eigen::Index kRunChunk = 512;

struct BlockLayout {
  std::vector<int> ascending;        // support offsets, ascending
  std::vector<Eigen::Index> offset;  // local index → index bits
  int low = 0;                       // lowest support offset

  explicit BlockLayout(std::span<const int> shifts)
      : ascending(shifts.begin(), shifts.end()),
        offset(std::size_t{1} << (2 * shifts.size())) {
    std::sort(ascending.begin(), ascending.end());
    for (std::size_t l = 0; l < offset.size(); ++l)
      offset[l] = spread(static_cast<unsigned>(l), shifts);
    low = ascending.empty() ? 0 : ascending.front();
  }

  // Work items are (outer block, chunk of the contiguous run).
  struct Item {
    Eigen::Index base;
    Eigen::Index len;
  };
  Eigen::Index run(Eigen::Index dim) const {
    return std::min(dim >> (2 * ascending.size()), Eigen::Index{1} << low);
  }
  Eigen::Index items(Eigen::Index dim) const {
    const Eigen::Index r = run(dim);
    const Eigen::Index chunks = (r + kRunChunk - 1) / kRunChunk;
    return (dim >> (2 * ascending.size())) / r * chunks;
  }
  Item item(Eigen::Index i, Eigen::Index dim) const {
    const Eigen::Index r = run(dim);
    const Eigen::Index chunks = (r + kRunChunk - 1) / kRunChunk;
    const Eigen::Index o = i / chunks;
    const Eigen::Index c = i % chunks;
    const Eigen::Index start = c * kRunChunk;
    return {deposit(o << low, ascending) + start, std::min(kRunChunk, r - start)};
  }
};

template <typename Scalar>
struct PreparedFlip {
  BlockLayout layout;
  std::vector<std::pair<unsigned, unsigned>> pairs;
  std::vector<Scalar> c, s;

  PreparedFlip(const FlipGenerator& g, double theta) : layout(g.shifts) {
    const std::size_t size = g.coupling.size();
    const unsigned lflip = local_index(g.flip, g.shifts);
    c.resize(size);
    s.resize(size);
    for (std::size_t l = 0; l < size; ++l) {
      const double r = std::abs(g.coupling[l]);
      c[l] = static_cast<Scalar>(std::cos(r * theta));
      s[l] = r == 0.0 ? Scalar(0)
                      : static_cast<Scalar>(Complex(0.0, -std::sin(r * theta) / r) * g.coupling[l]);
    }
    for (unsigned l = 0; l < size; ++l)
      if (l < (l ^ lflip)) pairs.emplace_back(l, l ^ lflip);
  }

  void apply(Scalar* amp, Eigen::Index dim, bool parallel) const {
    const Eigen::Index n_items = layout.items(dim);
#pragma omp parallel for schedule(static) if (parallel && n_items > 16)
    for (Eigen::Index i = 0; i < n_items; ++i) {
      const auto [base, len] = layout.item(i, dim);
      for (const auto& [lx, ly] : pairs) {
        Scalar* px = amp + (base | layout.offset[lx]);
        Scalar* py = amp + (base | layout.offset[ly]);
        const Scalar cx = c[lx], sx = s[lx], cy = c[ly], sy = s[ly];
        for (Eigen::Index r = 0; r < len; ++r) {
          const Scalar ax = px[r];
          const Scalar ay = py[r];
          px[r] = cx * ax + sx * ay;
          py[r] = cy * ay + sy * ax;
        }
      }
    }
  }
};

template <typename Scalar>
struct PreparedDiagonal {
  BlockLayout layout;
  std::vector<Scalar> phase;

  PreparedDiagonal(const DiagonalGenerator& g, double theta) : layout(g.shifts) {
    for (double v : g.values) phase.push_back(static_cast<Scalar>(std::exp(Complex(0.0, -theta * v))));
  }

  void apply(Scalar* amp, Eigen::Index dim, bool parallel) const {
    const Eigen::Index n_items = layout.items(dim);
#pragma omp parallel for schedule(static) if (parallel && n_items > 16)
    for (Eigen::Index i = 0; i < n_items; ++i) {
      const auto [base, len] = layout.item(i, dim);
      for (std::size_t l = 0; l < phase.size(); ++l) {
        if (phase[l] == Scalar(1)) continue;
        Scalar* p = amp + (base | layout.offset[l]);
        const Scalar f = phase[l];
        for (Eigen::Index r = 0; r < len; ++r) p[r] *= f;
      }
    }
  }
};

template <typename Scalar>
struct PreparedDense {
  BlockLayout layout;
  std::vector<std::vector<std::pair<int, Scalar>>> rows;

  PreparedDense(std::span<const int> shifts, const MatrixXc& matrix) : layout(shifts) {
    const Eigen::Index m = matrix.rows();
    rows.resize(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j)
        if (matrix(i, j) != Complex{})
          rows[i].emplace_back(static_cast<int>(j), static_cast<Scalar>(matrix(i, j)));
  }

  void apply(Scalar* amp, Eigen::Index dim, bool parallel) const {
    const Eigen::Index n_items = layout.items(dim);
    const std::size_t m = rows.size();
#pragma omp parallel if (parallel && n_items > 16)
    {
      std::vector<Scalar> in(m * static_cast<std::size_t>(kRunChunk));
#pragma omp for schedule(static)
      for (Eigen::Index i = 0; i < n_items; ++i) {
        const auto [base, len] = layout.item(i, dim);
        for (std::size_t j = 0; j < m; ++j)
          std::copy_n(amp + (base | layout.offset[j]), len, in.data() + j * kRunChunk);
        for (std::size_t a = 0; a < m; ++a) {
          Scalar* out = amp + (base | layout.offset[a]);
          for (Eigen::Index r = 0; r < len; ++r) out[r] = Scalar(0);
          for (const auto& [j, v] : rows[a]) {
            const Scalar* src = in.data() + static_cast<std::size_t>(j) * kRunChunk;
            for (Eigen::Index r = 0; r < len; ++r) out[r] += v * src[r];
          }
        }
      }
    }
  }
};

inline std::vector<int> qudit_shifts(std::span<const int> support, int n) {
  std::vector<int> s;
  for (int q : support) s.push_back(2 * (n - 1 - q));
  return s;
}

}  // namespace detail

/// Applies a dense 4^k × 4^k matrix to the listed qudits (support[0] is the
/// most significant local digit). Zero matrix entries are skipped.
template <typename Scalar>
void apply_local(BasicQuditState<Scalar>& state, std::span<const int> support,
                 const MatrixXc& matrix) {
  const int k = static_cast<int>(support.size());
  detail::check_support(support, state.n_qudits());
  if (k < 1 || k > 4) throw std::invalid_argument("apply_local supports 1 to 4 qudits");
  const Eigen::Index m = Eigen::Index{1} << (2 * k);
  if (matrix.rows() != m || matrix.cols() != m)
    throw std::invalid_argument("matrix size does not match support");
  const auto shifts = detail::qudit_shifts(support, state.n_qudits());
  detail::PreparedDense<Scalar>(shifts, matrix).apply(state.amplitudes().data(), state.dim(), true);
}

/// Generator of a local exponential. `op` keeps the symbolic form when the
/// term came from an OperatorSum.
struct LocalTerm {
  std::vector<int> support;
  MatrixXc generator;
  bool involutory = false;
  std::optional<OperatorSum> op;

  /// Throws std::invalid_argument if the matrix is not Hermitian to 1e-12.
  static LocalTerm from_matrix(std::vector<int> support, MatrixXc generator) {
    if ((generator - generator.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("generator is not Hermitian");
    LocalTerm t;
    t.support = std::move(support);
    t.involutory = ((generator * generator) - MatrixXc::Identity(generator.rows(), generator.cols()))
                       .cwiseAbs()
                       .maxCoeff() < 1e-12;
    t.generator = std::move(generator);
    return t;
  }

  static LocalTerm from_operator(const OperatorSum& op) {
    auto support = op.support();
    if (support.empty() || support.size() > 4)
      throw std::invalid_argument("local terms act on 1 to 4 qudits");
    LocalTerm t = from_matrix(support, to_dense_on(op, support));
    t.op = op;
    return t;
  }
};

/// e^{−iθ·generator}: cos θ − i sin θ·G for involutory generators, otherwise
/// through a Hermitian eigendecomposition.
inline MatrixXc local_exponential(const LocalTerm& term, double theta) {
  const Eigen::Index m = term.generator.rows();
  if (term.involutory)
    return std::cos(theta) * MatrixXc::Identity(m, m) -
           Complex(0.0, std::sin(theta)) * term.generator;
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(term.generator);
  const VectorXc phases =
      (Complex(0.0, -theta) * es.eigenvalues().cast<Complex>()).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

template <typename Scalar>
void apply_exp(BasicQuditState<Scalar>& state, const LocalTerm& term, double theta) {
  if ((term.generator - term.generator.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("generator is not Hermitian");
  apply_local(state, term.support, local_exponential(term, theta));
}

/// op·v for a raw amplitude vector over n qudits (no normalization).
template <typename Vector>
Vector apply_operator(const OperatorSum& op, const Vector& in, int n) {
  using Scalar = typename Vector::Scalar;
  if (in.size() != (Eigen::Index{1} << (2 * n))) throw std::invalid_argument("vector length mismatch");
  Vector out = Vector::Zero(in.size());
  for (const auto& term : op.terms()) {
    const detail::CompiledMonomial cm(term, n);
#pragma omp parallel for schedule(static) if (in.size() > 4096)
    for (Eigen::Index x = 0; x < in.size(); ++x)
      out[x ^ cm.flip] += static_cast<Scalar>(cm.phase(x)) * in[x];
  }
  return out;
}

template <typename Scalar>
typename BasicQuditState<Scalar>::Vector apply_operator(const BasicQuditState<Scalar>& state,
                                                        const OperatorSum& op) {
  return apply_operator(op, state.amplitudes(), state.n_qudits());
}

/// ψ ← op·ψ/‖op·ψ‖. Returns ‖op·ψ‖²; throws std::runtime_error when it vanishes.
template <typename Scalar>
double apply_and_normalize(BasicQuditState<Scalar>& state, const OperatorSum& op) {
  auto v = apply_operator(state, op);
  const double norm2 = static_cast<double>(v.squaredNorm());
  if (norm2 < 1e-24) throw std::runtime_error("state annihilated");
  state.amplitudes() = v / static_cast<typename BasicQuditState<Scalar>::Real>(std::sqrt(norm2));
  return norm2;
}

template <typename Scalar>
Complex expectation(const BasicQuditState<Scalar>& state, const OperatorSum& op) {
  const auto& a = state.amplitudes();
  std::vector<detail::CompiledMonomial> cms;
  for (const auto& t : op.terms()) cms.emplace_back(t, state.n_qudits());
  return detail::ordered_reduce<Complex>(a.size(), [&](Eigen::Index x) {
    Complex acc{};
    const Complex ax = static_cast<Complex>(a[x]);
    for (const auto& cm : cms) acc += std::conj(static_cast<Complex>(a[x ^ cm.flip])) * cm.phase(x) * ax;
    return acc;
  });
}

/// Real part of ⟨op⟩; throws std::domain_error if the imaginary part exceeds 1e-10.
template <typename Scalar>
double expectation_real(const BasicQuditState<Scalar>& state, const OperatorSum& op) {
  const Complex e = expectation(state, op);
  if (std::abs(e.imag()) > 1e-10) throw std::domain_error("expectation has an imaginary part");
  return e.real();
}

/// Sequentially applies (I + s_p G_p)/2, renormalizing once at the end.
/// Returns the survival probability.
template <typename Scalar>
double project_constraints(BasicQuditState<Scalar>& state, std::span<const OperatorSum> constraints,
                           std::span<const int> signs) {
  if (constraints.size() != signs.size())
    throw std::invalid_argument("one sign per constraint is required");
  for (std::size_t a = 0; a < constraints.size(); ++a)
    for (std::size_t b = a + 1; b < constraints.size(); ++b)
      if (!commutator(constraints[a], constraints[b]).empty())
        throw std::invalid_argument("constraints do not commute");
  using Real = typename BasicQuditState<Scalar>::Real;
  auto& amp = state.amplitudes();
  for (std::size_t p = 0; p < constraints.size(); ++p) {
    auto g = apply_operator(state, constraints[p]);
    amp = (amp + static_cast<Real>(signs[p]) * g) * Real(0.5);
  }
  const double survival = static_cast<double>(amp.squaredNorm());
  if (survival < 1e-24) throw std::runtime_error("projection annihilated the state");
  amp /= static_cast<Real>(std::sqrt(survival));
  return survival;
}

template <typename Scalar>
void apply_flip_exp(BasicQuditState<Scalar>& state, const FlipGenerator& g, double theta) {
  detail::PreparedFlip<Scalar>(g, theta).apply(state.amplitudes().data(), state.dim(), true);
}

/// Applies e^{−iθ Σ_g D_g} for commuting diagonal generators.
template <typename Scalar>
void apply_diagonal_exp(BasicQuditState<Scalar>& state, std::span<const DiagonalGenerator> gens,
                        double theta) {
  for (const auto& g : gens)
    detail::PreparedDiagonal<Scalar>(g, theta).apply(state.amplitudes().data(), state.dim(), true);
}

/// ⟨D_g⟩ for each diagonal generator, in one pass with a fixed reduction order.
template <typename Scalar>
std::vector<double> diagonal_expectations(const BasicQuditState<Scalar>& state,
                                          std::span<const DiagonalGenerator> gens) {
  const auto& amp = state.amplitudes();
  const Eigen::Index dim = state.dim();
  const Eigen::Index n_chunks = (dim + detail::kReductionChunk - 1) / detail::kReductionChunk;
  const std::size_t m = gens.size();
  std::vector<double> partial(static_cast<std::size_t>(n_chunks) * m, 0.0);
#pragma omp parallel for schedule(static) if (n_chunks > 4)
  for (Eigen::Index c = 0; c < n_chunks; ++c) {
    const Eigen::Index lo = c * detail::kReductionChunk;
    const Eigen::Index hi = std::min(dim, lo + detail::kReductionChunk);
    double* out = partial.data() + static_cast<std::size_t>(c) * m;
    for (Eigen::Index x = lo; x < hi; ++x) {
      const double p = static_cast<double>(std::norm(amp[x]));
      if (p == 0.0) continue;
      for (std::size_t k = 0; k < m; ++k)
        out[k] += p * gens[k].values[detail::local_index(x, gens[k].shifts)];
    }
  }
  std::vector<double> total(m, 0.0);
  for (Eigen::Index c = 0; c < n_chunks; ++c)
    for (std::size_t k = 0; k < m; ++k) total[k] += partial[static_cast<std::size_t>(c) * m + k];
  return total;
}

// ---------------------------------------------------------------------------
// Fused passes. Consecutive kernels that only touch the lowest few qudits are
// applied block by block: each contiguous block of 4^m amplitudes stays in
// cache while every kernel of the pass runs on it. Each amplitude sees the
// same arithmetic as with kernel-by-kernel application, so results are
// bitwise identical and do not depend on the thread count.

/// e^{−iθ·generator} as one step of a fused pass.
struct FusedKernel {
  std::variant<FlipGenerator, DiagonalGenerator, LocalTerm> generator;
  double theta = 0.0;

  /// Qudits touched, for a register of n qudits.
  std::vector<int> qudits(int n) const {
    if (const auto* t = std::get_if<LocalTerm>(&generator)) return t->support;
    const auto& shifts = std::holds_alternative<FlipGenerator>(generator)
                             ? std::get<FlipGenerator>(generator).shifts
                             : std::get<DiagonalGenerator>(generator).shifts;
    std::vector<int> q;
    for (int s : shifts) q.push_back(n - 1 - s / 2);
    return q;
  }
};

template <typename Scalar>
class FusedPass {
 public:
  /// Kernels must act on qudits n−block_qudits … n−1 only, unless
  /// block_qudits ≥ n (whole register, kernels applied one after another).
  FusedPass(int n, int block_qudits, std::span<const FusedKernel> kernels)
      : n_(n), block_(std::min(block_qudits, n)) {
    for (const auto& k : kernels) {
      for (int q : k.qudits(n))
        if (q < n - block_ || q >= n) throw std::invalid_argument("kernel acts outside the block");
      if (const auto* f = std::get_if<FlipGenerator>(&k.generator)) {
        kernels_.emplace_back(detail::PreparedFlip<Scalar>(*f, k.theta));
      } else if (const auto* d = std::get_if<DiagonalGenerator>(&k.generator)) {
        kernels_.emplace_back(detail::PreparedDiagonal<Scalar>(*d, k.theta));
      } else {
        const auto& t = std::get<LocalTerm>(k.generator);
        kernels_.emplace_back(detail::PreparedDense<Scalar>(detail::qudit_shifts(t.support, n),
                                                            local_exponential(t, k.theta)));
      }
    }
  }

  int block_qudits() const { return block_; }
  std::size_t size() const { return kernels_.size(); }

  void apply(BasicQuditState<Scalar>& state) const {
    if (state.n_qudits() != n_) throw std::invalid_argument("register size mismatch");
    auto* amp = state.amplitudes().data();
    if (block_ == n_) {
      for (const auto& k : kernels_)
        std::visit([&](const auto& kk) { kk.apply(amp, state.dim(), true); }, k);
      return;
    }
    const Eigen::Index block_dim = Eigen::Index{1} << (2 * block_);
    const Eigen::Index n_blocks = state.dim() / block_dim;
#pragma omp parallel for schedule(static)
    for (Eigen::Index b = 0; b < n_blocks; ++b)
      for (const auto& k : kernels_)
        std::visit([&](const auto& kk) { kk.apply(amp + b * block_dim, block_dim, false); }, k);
  }

 private:
  using Prepared = std::variant<detail::PreparedFlip<Scalar>, detail::PreparedDiagonal<Scalar>,
                                detail::PreparedDense<Scalar>>;
  int n_ = 0;
  int block_ = 0;
  std::vector<Prepared> kernels_;
};

inline constexpr int kDefaultBlockQudits = 8;

/// Packs runs of consecutive kernels acting within the lowest block_qudits
/// qudits into one pass each; every other kernel gets a pass of its own.
template <typename Scalar>
std::vector<FusedPass<Scalar>> fuse_kernels(int n, std::span<const FusedKernel> kernels,
                                            int block_qudits = kDefaultBlockQudits) {
  std::vector<FusedPass<Scalar>> passes;
  auto low = [&](const FusedKernel& k) {
    const auto q = k.qudits(n);
    return std::all_of(q.begin(), q.end(), [&](int x) { return x >= n - block_qudits; });
  };
  std::size_t i = 0;
  while (i < kernels.size()) {
    if (!low(kernels[i])) {
      passes.emplace_back(n, n, kernels.subspan(i, 1));
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < kernels.size() && low(kernels[j])) ++j;
    passes.emplace_back(n, block_qudits, kernels.subspan(i, j - i));
    i = j;
  }
  return passes;
}

}  // namespace ququart
