#include "ququart/gamma.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>

namespace ququart {
namespace {

Complex snap_unit(Complex z) {
  // nearest of {1, i, -1, -i}
  if (std::abs(z.real()) >= std::abs(z.imag())) return {z.real() > 0 ? 1.0 : -1.0, 0.0};
  return {0.0, z.imag() > 0 ? 1.0 : -1.0};
}

Complex snap(Complex z) {
  double re = std::abs(z.real()) < kZeroSnap ? 0.0 : z.real();
  double im = std::abs(z.imag()) < kZeroSnap ? 0.0 : z.imag();
  return {re, im};
}

struct Tables {
  std::array<Matrix4c, 16> canonical;
  std::array<std::array<SiteProduct, 16>, 16> product;
  std::array<std::array<int, 4>, 16> image;
  std::array<std::array<Complex, 4>, 16> phase;
  std::array<int, 16> hermiticity;
  std::array<std::string, 16> label;

  Tables() {
    Eigen::Matrix2cd sx, sy, sz, id;
    sx << 0, 1, 1, 0;
    sy << 0, -kI, kI, 0;
    sz << 1, 0, 0, -1;
    id.setIdentity();
    auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
      Matrix4c out;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
      return out;
    };
    const std::array<Matrix4c, 4> g{kron(sx, id), kron(sy, id), kron(sz, sx), kron(sz, sy)};
    const Matrix4c tilde = kron(sz, sz);

    for (int m = 0; m < 16; ++m) {
      const int pc = std::popcount(static_cast<unsigned>(m));
      Matrix4c mat = Matrix4c::Identity();
      std::string name;
      if (pc <= 2) {
        name = pc == 0 ? "I" : "G";
        for (int k = 0; k < 4; ++k)
          if (m & (1 << k)) {
            mat = mat * g[k];
            name += static_cast<char>('1' + k);
          }
      } else if (pc == 3) {
        const int missing = std::countr_zero(static_cast<unsigned>(~m & 0xF));
        mat = tilde * g[missing];
        name = "Gt" + std::string(1, static_cast<char>('1' + missing));
      } else {
        mat = tilde;
        name = "Gt";
      }
      canonical[m] = mat;
      label[m] = name;
      for (int col = 0; col < 4; ++col) {
        for (int row = 0; row < 4; ++row) {
          if (std::abs(mat(row, col)) > 0.5) {
            image[m][col] = row;
            phase[m][col] = snap_unit(mat(row, col));
          }
        }
      }
      hermiticity[m] = (mat.adjoint() - mat).norm() < 1e-12 ? 1 : -1;
    }

    for (int a = 0; a < 16; ++a) {
      for (int b = 0; b < 16; ++b) {
        const Matrix4c p = canonical[a] * canonical[b];
        const int m = a ^ b;
        const int col = 0;
        const int row = image[m][col];
        const Complex ph = snap_unit(p(row, col) / canonical[m](row, col));
        if ((p - ph * canonical[m]).norm() > 1e-12)
          throw std::logic_error("Clifford product table is inconsistent");
        product[a][b] = SiteProduct{ph, SiteFactor::from_mask(static_cast<std::uint8_t>(m))};
      }
    }
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

std::optional<SiteFactor> SiteFactor::from_label(std::string_view label) {
  const auto& t = tables();
  for (int m = 0; m < 16; ++m)
    if (t.label[m] == label) return SiteFactor::from_mask(static_cast<std::uint8_t>(m));
  return std::nullopt;
}

std::string SiteFactor::label() const { return tables().label[mask_]; }
const Matrix4c& SiteFactor::matrix() const { return tables().canonical[mask_]; }
int SiteFactor::image(int level) const { return tables().image[mask_][level]; }
Complex SiteFactor::phase(int level) const { return tables().phase[mask_][level]; }
int SiteFactor::hermiticity() const { return tables().hermiticity[mask_]; }

bool SiteFactor::is_diagonal() const {
  const auto& im = tables().image[mask_];
  return im[0] == 0 && im[1] == 1 && im[2] == 2 && im[3] == 3;
}

SiteFactor gamma(int mu) {
  if (mu < 1 || mu > 4) throw std::out_of_range("gamma index must be in 1..4");
  return SiteFactor::from_mask(static_cast<std::uint8_t>(1u << (mu - 1)));
}

SiteFactor gamma_tilde() { return SiteFactor::from_mask(0xF); }

SiteFactor gamma_tilde_mu(int mu) { return multiply(gamma_tilde(), gamma(mu)).factor; }

SiteProduct multiply(SiteFactor a, SiteFactor b) { return tables().product[a.mask()][b.mask()]; }

bool anticommute(SiteFactor a, SiteFactor b) {
  const auto ab = multiply(a, b).phase;
  const auto ba = multiply(b, a).phase;
  return std::abs(ab + ba) < 0.5;
}

// ---------------------------------------------------------------------------

QuditMonomial::QuditMonomial(Complex coefficient, std::span<const Factor> ordered_factors)
    : coefficient_(coefficient) {
  std::map<int, SiteFactor> acc;
  for (const auto& [q, f] : ordered_factors) {
    if (q < 0) throw std::out_of_range("negative qudit index");
    auto [it, inserted] = acc.try_emplace(q, f);
    if (!inserted) {
      const auto p = multiply(it->second, f);
      coefficient_ *= p.phase;
      it->second = p.factor;
    }
  }
  for (const auto& [q, f] : acc)
    if (!f.is_identity()) factors_.emplace_back(q, f);
}

QuditMonomial QuditMonomial::single(int qudit, SiteFactor f, Complex c) {
  return QuditMonomial(c, {{qudit, f}});
}

SiteFactor QuditMonomial::factor_at(int qudit) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), qudit,
                             [](const Factor& f, int q) { return f.first < q; });
  if (it != factors_.end() && it->first == qudit) return it->second;
  return SiteFactor{};
}

std::vector<int> QuditMonomial::support() const {
  std::vector<int> s;
  s.reserve(factors_.size());
  for (const auto& f : factors_) s.push_back(f.first);
  return s;
}

QuditMonomial QuditMonomial::adjoint() const {
  QuditMonomial out = *this;
  int sign = 1;
  for (const auto& f : factors_) sign *= f.second.hermiticity();
  out.coefficient_ = std::conj(coefficient_) * static_cast<double>(sign);
  return out;
}

QuditMonomial QuditMonomial::with_coefficient(Complex c) const {
  QuditMonomial out = *this;
  out.coefficient_ = c;
  return out;
}

bool QuditMonomial::is_diagonal() const {
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const Factor& f) { return f.second.is_diagonal(); });
}

bool QuditMonomial::commutes_with(const QuditMonomial& other) const {
  int flips = 0;
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() && b != other.factors_.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      if (anticommute(a->second, b->second)) ++flips;
      ++a;
      ++b;
    }
  }
  return flips % 2 == 0;
}

QuditMonomial operator*(const QuditMonomial& a, const QuditMonomial& b) {
  QuditMonomial out(a.coefficient_ * b.coefficient_);
  out.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto ia = a.factors_.begin();
  auto ib = b.factors_.begin();
  while (ia != a.factors_.end() || ib != b.factors_.end()) {
    if (ib == b.factors_.end() || (ia != a.factors_.end() && ia->first < ib->first)) {
      out.factors_.push_back(*ia++);
    } else if (ia == a.factors_.end() || ib->first < ia->first) {
      out.factors_.push_back(*ib++);
    } else {
      const auto p = multiply(ia->second, ib->second);
      out.coefficient_ *= p.phase;
      if (!p.factor.is_identity()) out.factors_.emplace_back(ia->first, p.factor);
      ++ia;
      ++ib;
    }
  }
  return out;
}

int weight(const QuditMonomial& m) { return m.weight(); }

QuditMonomial monomial_product(const QuditMonomial& a, const QuditMonomial& b) { return a * b; }

// ---------------------------------------------------------------------------

OperatorSum::OperatorSum(const QuditMonomial& m) : terms_{m} { canonicalize(); }

OperatorSum::OperatorSum(std::vector<QuditMonomial> terms) : terms_(std::move(terms)) {
  canonicalize();
}

void OperatorSum::canonicalize() {
  std::sort(terms_.begin(), terms_.end(), [](const QuditMonomial& a, const QuditMonomial& b) {
    return std::lexicographical_compare(a.factors().begin(), a.factors().end(),
                                        b.factors().begin(), b.factors().end());
  });
  std::vector<QuditMonomial> merged;
  merged.reserve(terms_.size());
  for (const auto& t : terms_) {
    if (!merged.empty() && merged.back().same_factors(t)) {
      merged.back() = merged.back().with_coefficient(merged.back().coefficient() + t.coefficient());
    } else {
      merged.push_back(t);
    }
  }
  terms_.clear();
  for (auto& t : merged) {
    const Complex c = snap(t.coefficient());
    if (c != Complex{}) terms_.push_back(t.with_coefficient(c));
  }
}

OperatorSum OperatorSum::adjoint() const {
  std::vector<QuditMonomial> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.adjoint());
  return OperatorSum(std::move(out));
}

bool OperatorSum::is_hermitian(double tol) const {
  return max_abs_difference(*this, adjoint()) <= tol;
}

bool OperatorSum::is_diagonal() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const QuditMonomial& t) { return t.is_diagonal(); });
}

int OperatorSum::max_weight() const {
  int w = 0;
  for (const auto& t : terms_) w = std::max(w, t.weight());
  return w;
}

std::vector<int> OperatorSum::support() const {
  std::vector<int> s;
  for (const auto& t : terms_)
    for (const auto& f : t.factors()) s.push_back(f.first);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  canonicalize();
  return *this;
}

OperatorSum& OperatorSum::operator-=(const OperatorSum& o) { return *this += -1.0 * o; }

OperatorSum& OperatorSum::operator*=(Complex c) {
  for (auto& t : terms_) t = t.with_coefficient(t.coefficient() * c);
  canonicalize();
  return *this;
}

OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
  std::vector<QuditMonomial> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_)
    for (const auto& y : b.terms_) out.push_back(x * y);
  return OperatorSum(std::move(out));
}

OperatorSum commutator(const OperatorSum& a, const OperatorSum& b) { return a * b - b * a; }

OperatorSum anticommutator(const OperatorSum& a, const OperatorSum& b) { return a * b + b * a; }

double max_abs_difference(const OperatorSum& a, const OperatorSum& b) {
  const OperatorSum d = a - b;
  double m = 0.0;
  for (const auto& t : d.terms()) m = std::max(m, std::abs(t.coefficient()));
  return m;
}

namespace {

MatrixXc expand(const OperatorSum& op, std::span<const int> support, int cap) {
  const int n = static_cast<int>(support.size());
  if (n > cap)
    throw std::length_error("to_dense: " + std::to_string(n) + " qudits exceeds cap of " +
                            std::to_string(cap));
  std::map<int, int> position;
  for (int k = 0; k < n; ++k) position[support[k]] = k;
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  MatrixXc out = MatrixXc::Zero(dim, dim);
  for (const auto& term : op.terms()) {
    std::vector<std::pair<int, SiteFactor>> local;  // (shift, factor)
    for (const auto& [q, f] : term.factors()) {
      auto it = position.find(q);
      if (it == position.end())
        throw std::out_of_range("operator acts on qudit " + std::to_string(q) +
                                " outside the requested support");
      local.emplace_back(2 * (n - 1 - it->second), f);
    }
    for (Eigen::Index col = 0; col < dim; ++col) {
      Eigen::Index row = col;
      Complex amp = term.coefficient();
      for (const auto& [shift, f] : local) {
        const int d = static_cast<int>((col >> shift) & 3);
        amp *= f.phase(d);
        row = (row & ~(Eigen::Index{3} << shift)) | (Eigen::Index{f.image(d)} << shift);
      }
      out(row, col) += amp;
    }
  }
  return out;
}

}  // namespace

SparseMatrixc to_sparse_on(const OperatorSum& op, std::span<const int> support) {
  const int n = static_cast<int>(support.size());
  if (n > 12) throw std::length_error("to_sparse_on: support too wide");
  std::map<int, int> position;
  for (int k = 0; k < n; ++k) position[support[k]] = k;
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(dim) * op.size());
  for (const auto& term : op.terms()) {
    std::vector<std::pair<int, SiteFactor>> local;
    for (const auto& [q, f] : term.factors()) {
      auto it = position.find(q);
      if (it == position.end())
        throw std::out_of_range("operator acts on qudit " + std::to_string(q) +
                                " outside the requested support");
      local.emplace_back(2 * (n - 1 - it->second), f);
    }
    for (Eigen::Index col = 0; col < dim; ++col) {
      Eigen::Index row = col;
      Complex amp = term.coefficient();
      for (const auto& [shift, f] : local) {
        const int d = static_cast<int>((col >> shift) & 3);
        amp *= f.phase(d);
        row = (row & ~(Eigen::Index{3} << shift)) | (Eigen::Index{f.image(d)} << shift);
      }
      entries.emplace_back(row, col, amp);
    }
  }
  SparseMatrixc out(dim, dim);
  out.setFromTriplets(entries.begin(), entries.end());
  out.prune([](Eigen::Index, Eigen::Index, const Complex& v) { return std::abs(v) > kZeroSnap; });
  return out;
}

MatrixXc to_dense(const OperatorSum& op, int n_qudits, int cap) {
  std::vector<int> support(static_cast<std::size_t>(std::max(n_qudits, 0)));
  for (int q = 0; q < n_qudits; ++q) support[q] = q;
  return expand(op, support, cap);
}

MatrixXc to_dense_on(const OperatorSum& op, std::span<const int> support, int cap) {
  return expand(op, support, cap);
}

}  // namespace ququart
