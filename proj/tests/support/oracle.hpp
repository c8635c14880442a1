#pragma once

// Reference constructions built directly from Pauli matrices, independent of
// the library's symbolic algebra.

#include "ququart/gamma.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <random>
#include <vector>

namespace oracle {

using ququart::Complex;
using ququart::MatrixXc;
using ququart::kI;

inline MatrixXc pauli(char p) {
  MatrixXc m(2, 2);
  switch (p) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, -kI, kI, 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m = MatrixXc::Identity(2, 2);
  }
  return m;
}

inline MatrixXc kron(const MatrixXc& a, const MatrixXc& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

/// Γ1..Γ4 from Pauli pairs; mu = 0 gives Γ̃ = −Γ1Γ2Γ3Γ4.
inline MatrixXc gamma(int mu) {
  switch (mu) {
    case 1: return kron(pauli('x'), pauli('i'));
    case 2: return kron(pauli('y'), pauli('i'));
    case 3: return kron(pauli('z'), pauli('x'));
    case 4: return kron(pauli('z'), pauli('y'));
    default: return -(gamma(1) * gamma(2) * gamma(3) * gamma(4));
  }
}

/// Single-site operator m placed on qudit q of n (qudit 0 most significant).
inline MatrixXc embed(const MatrixXc& m, int q, int n) {
  MatrixXc out = MatrixXc::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, k == q ? m : MatrixXc::Identity(4, 4));
  return out;
}

/// Qubit Jordan-Wigner annihilator of mode j among n modes, mode 0 the most
/// significant qubit; |1> is occupied.
inline MatrixXc annihilator(int j, int n) {
  MatrixXc lower(2, 2);
  lower << 0, 1, 0, 0;
  MatrixXc out = MatrixXc::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, k < j ? pauli('z') : k == j ? lower : pauli('i'));
  return out;
}

inline Eigen::VectorXd sorted_eigenvalues(const MatrixXc& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXc> es(h);
  return es.eigenvalues();
}

/// Dense e^{−iθH} through Eigen's Padé-based matrix exponential.
inline MatrixXc expm(const MatrixXc& h, double theta) {
  const MatrixXc a = (-kI * theta) * h;
  return a.exp();
}

inline MatrixXc random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  MatrixXc m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

}  // namespace oracle
