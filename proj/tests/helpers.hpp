#pragma once

#include <Eigen/Dense>
#include <vector>

#include "vq/model.hpp"
#include "vq/mps.hpp"
#include "vq/spectrum.hpp"
#include "vq/tebd.hpp"

namespace testutil {

// Dense amplitude vector of an MPS in the product basis of
// dense_hamiltonian (site 0 most significant).
inline vq::Vec mps_to_dense(const vq::Mps& psi) {
  const auto& dims = psi.local_dims();
  long dim = 1;
  for (int d : dims) dim *= d;
  vq::Vec out(dim);
  std::vector<int> digits(dims.size());
  for (long idx = 0; idx < dim; ++idx) {
    long rem = idx;
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      digits[i] = static_cast<int>(rem % dims[i]);
      rem /= dims[i];
    }
    vq::Mat prod = vq::Mat::Identity(1, 1);
    for (int i = 0; i < psi.size(); ++i) prod = prod * psi.tensor(i, digits[i]);
    out(idx) = prod(0, 0);
  }
  return out;
}

struct DenseEig {
  vq::RVec values;
  vq::Mat vectors;
};

inline DenseEig dense_eig(const vq::Mat& h) {
  Eigen::SelfAdjointEigenSolver<vq::Mat> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

// Lowest eigenvalue among basis states with the given parity sign.
inline double dense_parity_minimum(const vq::Mat& h, const vq::RVec& parity,
                                   int sign) {
  std::vector<long> keep;
  for (long i = 0; i < parity.size(); ++i)
    if ((parity(i) > 0) == (sign > 0)) keep.push_back(i);
  vq::Mat block(keep.size(), keep.size());
  for (size_t r = 0; r < keep.size(); ++r)
    for (size_t c = 0; c < keep.size(); ++c)
      block(r, c) = h(keep[r], keep[c]);
  Eigen::SelfAdjointEigenSolver<vq::Mat> es(block);
  return es.eigenvalues()(0);
}

// Ground-state search with tightened stopping for oracle-grade comparisons.
inline vq::EigenRecord tight_eigenstate(
    const vq::ModelParams& p, const vq::Numerics& num, int sector,
    const std::vector<const vq::Mps*>& ortho = {}) {
  vq::Numerics n = num;
  n.energy_tol = std::min(n.energy_tol, 1e-9);
  vq::EigenSearchOptions opts;
  opts.dt_min = 2e-4;
  return vq::find_eigenstate(p, n, sector, ortho, opts);
}

}  // namespace testutil
