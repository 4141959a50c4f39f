#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <cstdint>

namespace vq {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Result of a truncated SVD, M ~= U * diag(s) * Vt.
struct SvdResult {
  Mat u;       // m x rank
  RVec s;      // rank
  Mat vt;      // rank x n
  int rank = 0;
  double discarded = 0.0;  // relative discarded weight sum(s_drop^2)/sum(s^2)
};

/// Truncated SVD via LAPACK (zgesdd). Keeps at most max_rank singular values
/// and drops trailing ones while the relative discarded weight stays <= rel_tol.
SvdResult svd_truncate(const Mat& m, int max_rank, double rel_tol);

/// Lowest eigenvalue of a real symmetric operator given through its matvec,
/// by Lanczos with full reorthogonalization. Deterministic for a fixed seed.
double lanczos_lowest(const std::function<RVec(const RVec&)>& matvec, int dim,
                      int max_iter = 300, double tol = 1e-11,
                      std::uint64_t seed = 7);

/// Kronecker product, left factor major (row index = i_a * rows_b + i_b).
Mat kron(const Mat& a, const Mat& b);

/// exp(scale * h) for Hermitian h.
Mat hermitian_exp(const Mat& h, cxd scale);

}  // namespace vq
