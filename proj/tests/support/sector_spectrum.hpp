#pragma once

// Spectrum of a mapped Hamiltonian on one joint eigenspace of its constraints
// and residual symmetries, by dense projection.

#include "ququart/mappings.hpp"

#include <Eigen/Eigenvalues>

#include <vector>

namespace oracle {

struct SectorSpectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  int dimension = 0;
  int residual_count = 0;
};

/// Constraints at the model's sector signs, residual symmetries at +1.
inline SectorSpectrum sector_spectrum(const ququart::MappedModel& model) {
  using namespace ququart;
  const int n = model.n_qudits();
  const Eigen::Index dim = Eigen::Index{1} << (2 * n);
  const Mapping m = model.mapping();

  std::vector<QuditMonomial> gens;
  for (const auto& g : model.constraints) gens.push_back(g.terms().front());
  const auto residual = residual_symmetries(m, gens);

  MatrixXc p = MatrixXc::Identity(dim, dim);
  const MatrixXc id = MatrixXc::Identity(dim, dim);
  for (std::size_t k = 0; k < model.constraints.size(); ++k)
    p = p * (0.5 * (id + static_cast<double>(model.sector_signs[k]) * to_dense(model.constraints[k], n)));
  for (const auto& r : residual) p = p * (0.5 * (id + to_dense(OperatorSum(r), n)));

  Eigen::SelfAdjointEigenSolver<MatrixXc> ps(0.5 * (p + p.adjoint()));
  std::vector<Eigen::Index> cols;
  for (Eigen::Index k = 0; k < dim; ++k)
    if (ps.eigenvalues()[k] > 0.5) cols.push_back(k);
  MatrixXc q(dim, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) q.col(static_cast<Eigen::Index>(c)) = ps.eigenvectors().col(cols[c]);

  const MatrixXc h = to_dense(model.hamiltonian, n);
  const MatrixXc hr = q.adjoint() * h * q;
  Eigen::SelfAdjointEigenSolver<MatrixXc> hs(0.5 * (hr + hr.adjoint()), Eigen::EigenvaluesOnly);
  return {hs.eigenvalues(), static_cast<int>(cols.size()), static_cast<int>(residual.size())};
}

}  // namespace oracle
