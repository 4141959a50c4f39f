#include "vq/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

namespace vq {

SvdResult svd_truncate(const Mat& m, int max_rank, double rel_tol) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  const int kmax = std::min(rows, cols);
  if (kmax == 0) throw std::invalid_argument("svd_truncate: empty matrix");

  Mat a = m;  // zgesdd destroys its input
  RVec s(kmax);
  Mat u(rows, kmax), vt(kmax, cols);
  int info = LAPACKE_zgesdd(
      LAPACK_COL_MAJOR, 'S', rows, cols,
      reinterpret_cast<lapack_complex_double*>(a.data()), rows, s.data(),
      reinterpret_cast<lapack_complex_double*>(u.data()), rows,
      reinterpret_cast<lapack_complex_double*>(vt.data()), kmax);
  if (info != 0) throw std::runtime_error("svd_truncate: zgesdd failed");

  double total = s.squaredNorm();
  SvdResult out;
  if (total == 0.0) {
    out.rank = 1;
    out.u = u.leftCols(1);
    out.s = s.head(1);
    out.vt = vt.topRows(1);
    out.discarded = 0.0;
    return out;
  }

  int rank = std::min(kmax, std::max(1, max_rank));
  // shrink further while the discarded weight stays within rel_tol
  double dropped = 0.0;
  for (int i = kmax - 1; i >= rank; --i) dropped += s(i) * s(i);
  while (rank > 1 && (dropped + s(rank - 1) * s(rank - 1)) / total <= rel_tol) {
    dropped += s(rank - 1) * s(rank - 1);
    --rank;
  }
  out.rank = rank;
  out.u = u.leftCols(rank);
  out.s = s.head(rank);
  out.vt = vt.topRows(rank);
  out.discarded = dropped / total;
  return out;
}

double lanczos_lowest(const std::function<RVec(const RVec&)>& matvec, int dim,
                      int max_iter, double tol, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("lanczos_lowest: empty operator");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<RVec> basis;
  RVec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
  v.normalize();
  basis.push_back(v);

  std::vector<double> alpha, beta;
  double best = 0.0, prev = 1e300;
  const int m_cap = std::min(max_iter, dim);
  for (int it = 0; it < m_cap; ++it) {
    RVec w = matvec(basis[it]);
    double a = basis[it].dot(w);
    alpha.push_back(a);
    w -= a * basis[it];
    if (it > 0) w -= beta[it - 1] * basis[it - 1];
    // full reorthogonalization, twice
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : basis) w -= q.dot(w) * q;

    // tridiagonal eigenvalues so far
    const int n = it + 1;
    Eigen::SelfAdjointEigenSolver<RMat> es;
    RMat t = RMat::Zero(n, n);
    for (int i = 0; i < n; ++i) t(i, i) = alpha[i];
    for (int i = 0; i + 1 < n; ++i) t(i, i + 1) = t(i + 1, i) = beta[i];
    es.compute(t, Eigen::EigenvaluesOnly);
    best = es.eigenvalues()(0);

    double b = w.norm();
    if (b < 1e-13) break;
    if (n >= 10 && std::abs(best - prev) < tol * std::max(1.0, std::abs(best)))
      break;
    prev = best;
    beta.push_back(b);
    basis.push_back(w / b);
  }
  return best;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat hermitian_exp(const Mat& h, cxd scale) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec phase(es.eigenvalues().size());
  for (int i = 0; i < phase.size(); ++i)
    phase(i) = std::exp(scale * es.eigenvalues()(i));
  return es.eigenvectors() * phase.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace vq
