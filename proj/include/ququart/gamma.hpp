#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ququart {

using Complex = std::complex<double>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using MatrixXc = Eigen::MatrixXcd;
using VectorXc = Eigen::VectorXcd;
using SparseMatrixc = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

// Coefficients produced by the mappings are Gaussian integers times powers of
// i and small rationals; anything below this is treated as an exact zero.
inline constexpr double kZeroSnap = 1e-12;

// Default cap on the number of qudits expanded by to_dense().
inline constexpr int kDenseQuditCap = 7;

/// One of the 16 Clifford words acting on a single ququart.
///
/// A factor is identified by the subset of {Γ1, Γ2, Γ3, Γ4} it contains
/// (bit k set means Γ_{k+1} is present). The canonical matrix for a subset
/// with at most two elements is the ascending product, e.g. Γ12 = Γ1Γ2. The
/// three-element subsets are written as Γ̃Γμ with μ the missing index, and the
/// full subset is Γ̃ = −Γ1Γ2Γ3Γ4. Every canonical matrix is a signed
/// permutation matrix with entries in {0, ±1, ±i}.
class SiteFactor {
 public:
  constexpr SiteFactor() = default;

  static constexpr SiteFactor from_mask(std::uint8_t mask) {
    SiteFactor f;
    f.mask_ = static_cast<std::uint8_t>(mask & 0xF);
    return f;
  }
  static std::optional<SiteFactor> from_label(std::string_view label);

  constexpr std::uint8_t mask() const { return mask_; }
  constexpr bool is_identity() const { return mask_ == 0; }

  std::string label() const;
  const Matrix4c& matrix() const;

  // E|d> = phase(d) |image(d)>
  int image(int level) const;
  Complex phase(int level) const;

  // +1 when the canonical matrix is Hermitian, −1 when anti-Hermitian.
  int hermiticity() const;
  bool is_diagonal() const;

  friend constexpr bool operator==(SiteFactor, SiteFactor) = default;
  friend constexpr auto operator<=>(SiteFactor a, SiteFactor b) {
    return a.mask_ <=> b.mask_;
  }

 private:
  std::uint8_t mask_ = 0;
};

/// Γμ for mu in 1..4. Throws std::out_of_range otherwise.
SiteFactor gamma(int mu);
/// Γ̃ = −Γ1Γ2Γ3Γ4.
SiteFactor gamma_tilde();
/// Γ̃Γμ, written Γ̃^μ.
SiteFactor gamma_tilde_mu(int mu);

struct SiteProduct {
  Complex phase;
  SiteFactor factor;
};

/// a·b = phase · canonical(a ^ b), looked up from the numerically built table.
SiteProduct multiply(SiteFactor a, SiteFactor b);

/// True when ab = −ba.
bool anticommute(SiteFactor a, SiteFactor b);

/// Coefficient times a tensor product of site factors keyed by qudit index.
/// Identity factors are never stored; factors are kept sorted by qudit.
class QuditMonomial {
 public:
  using Factor = std::pair<int, SiteFactor>;

  QuditMonomial() = default;
  explicit QuditMonomial(Complex coefficient) : coefficient_(coefficient) {}

  /// Builds c · f_0 f_1 ... in the given order. Factors that land on the same
  /// qudit are multiplied left to right.
  QuditMonomial(Complex coefficient, std::span<const Factor> ordered_factors);
  QuditMonomial(Complex coefficient, std::initializer_list<Factor> ordered_factors)
      : QuditMonomial(coefficient,
                      std::span<const Factor>(ordered_factors.begin(),
                                              ordered_factors.size())) {}

  static QuditMonomial single(int qudit, SiteFactor f, Complex c = 1.0);

  Complex coefficient() const { return coefficient_; }
  std::span<const Factor> factors() const { return factors_; }
  SiteFactor factor_at(int qudit) const;
  std::vector<int> support() const;
  int weight() const { return static_cast<int>(factors_.size()); }
  int max_qudit() const { return factors_.empty() ? -1 : factors_.back().first; }

  QuditMonomial adjoint() const;
  QuditMonomial with_coefficient(Complex c) const;
  bool same_factors(const QuditMonomial& other) const {
    return factors_ == other.factors_;
  }
  bool is_diagonal() const;

  /// Exact (anti)commutation of the factor parts; coefficients are ignored.
  bool commutes_with(const QuditMonomial& other) const;

  friend QuditMonomial operator*(const QuditMonomial& a, const QuditMonomial& b);
  friend QuditMonomial operator*(Complex c, const QuditMonomial& m) {
    return m.with_coefficient(c * m.coefficient_);
  }

 private:
  Complex coefficient_{1.0, 0.0};
  std::vector<Factor> factors_;
};

int weight(const QuditMonomial& m);
QuditMonomial monomial_product(const QuditMonomial& a, const QuditMonomial& b);

/// Finite sum of monomials, always kept in canonical form: terms with equal
/// factor maps are merged, near-zero coefficients dropped, order is by factor
/// map.
class OperatorSum {
 public:
  OperatorSum() = default;
  OperatorSum(const QuditMonomial& m);  // NOLINT(google-explicit-constructor)
  explicit OperatorSum(std::vector<QuditMonomial> terms);

  static OperatorSum identity(Complex c = 1.0) { return OperatorSum(QuditMonomial(c)); }

  std::span<const QuditMonomial> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  OperatorSum adjoint() const;
  bool is_hermitian(double tol = kZeroSnap) const;
  bool is_diagonal() const;
  int max_weight() const;
  std::vector<int> support() const;

  OperatorSum& operator+=(const OperatorSum& o);
  OperatorSum& operator-=(const OperatorSum& o);
  OperatorSum& operator*=(Complex c);

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
  friend OperatorSum operator-(OperatorSum a) { return a *= -1.0; }
  friend OperatorSum operator*(Complex c, OperatorSum a) { return a *= c; }
  friend OperatorSum operator*(OperatorSum a, Complex c) { return a *= c; }
  friend OperatorSum operator*(const OperatorSum& a, const OperatorSum& b);

 private:
  void canonicalize();
  std::vector<QuditMonomial> terms_;
};

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b);
OperatorSum anticommutator(const OperatorSum& a, const OperatorSum& b);

/// Largest |coefficient| difference between two canonical sums.
double max_abs_difference(const OperatorSum& a, const OperatorSum& b);

/// Full 4^n × 4^n matrix. Qudit 0 is the most significant base-4 digit.
MatrixXc to_dense(const OperatorSum& op, int n_qudits, int cap = kDenseQuditCap);

/// Matrix of op restricted to the listed qudits (support[0] most significant).
/// Throws if op acts outside the support.
MatrixXc to_dense_on(const OperatorSum& op, std::span<const int> support,
                     int cap = kDenseQuditCap);

/// Sparse counterpart of to_dense_on for supports too wide to expand densely.
/// Each monomial contributes exactly one entry per column.
SparseMatrixc to_sparse_on(const OperatorSum& op, std::span<const int> support);

}  // namespace ququart
