#include "vq/polaron.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vq {

ModeBasis ModeBasis::periodic(const ModelParams& p) {
  BandInfo b = band_info(p);
  ModeBasis m;
  m.omega.resize(p.n_sites);
  for (int j = 0; j < p.n_sites; ++j) m.omega(j) = dispersion(p, b.momenta(j));
  m.g = coupling_gk(p);
  return m;
}

ModeBasis ModeBasis::open_chain(const ModelParams& p) {
  p.validate();
  const int n = p.n_sites;
  const int x0 = p.qubit();
  ModeBasis m;
  m.omega.resize(n);
  m.g.resize(n);
  for (int q = 1; q <= n; ++q) {
    double kq = q * std::numbers::pi / (n + 1);
    m.omega(q - 1) = p.omega - 2 * p.j_hop * std::cos(kq);
    m.g(q - 1) = p.g * std::sqrt(2.0 / (n + 1)) * std::sin(kq * (x0 + 1));
  }
  return m;
}

PolaronSolution solve_polaron(const ModelParams& p, double tol, int max_iter,
                              double damping) {
  return solve_polaron(p, ModeBasis::periodic(p), tol, max_iter, damping);
}

PolaronSolution solve_polaron(const ModelParams& p, const ModeBasis& modes,
                              double tol, int max_iter, double damping) {
  p.validate();
  if (tol <= 0) throw std::invalid_argument("solve_polaron: tol must be > 0");

  PolaronSolution sol;
  sol.params = p;
  sol.modes = modes;

  double delta_r = p.delta;  // exact at g = 0
  RVec f(modes.omega.size());
  double residual = 0.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    for (int k = 0; k < f.size(); ++k)
      f(k) = modes.g(k) / (delta_r + modes.omega(k));
    double target = p.delta * std::exp(-2.0 * f.squaredNorm());
    residual = std::abs(delta_r - target);
    if (residual <= tol) break;
    delta_r = (1.0 - damping) * delta_r + damping * target;
  }
  if (residual > tol)
    throw std::runtime_error(
        "solve_polaron: no convergence after " + std::to_string(max_iter) +
        " iterations, residual " + std::to_string(residual));

  sol.f_k = f;
  sol.delta_r = delta_r;
  sol.iterations = it;
  sol.residual = residual;
  double e = (p.delta - delta_r) / 2.0;
  for (int k = 0; k < f.size(); ++k)
    e += modes.omega(k) * f(k) * f(k) - 2.0 * modes.g(k) * f(k);
  sol.e_gs = e;
  return sol;
}

double excited_probability(const PolaronSolution& sol) {
  if (sol.params.delta <= 0)
    throw std::domain_error("excited_probability: delta = 0");
  return (1.0 - sol.delta_r / sol.params.delta) / 2.0;
}

double fidelity_to_bare(const PolaronSolution& sol) {
  return std::exp(-sol.f_k.squaredNorm());
}

Vec polaron_fx(const PolaronSolution& sol) {
  const int n = static_cast<int>(sol.f_k.size());
  const int q = sol.params.qubit();
  Vec rel(n);
  for (int x = 0; x < n; ++x) {
    cxd acc = 0.0;
    for (int j = 0; j < n; ++j)
      acc += std::exp(cxd(0.0, 2.0 * std::numbers::pi * j * x / n)) * sol.f_k(j);
    rel(x) = acc / std::sqrt(double(n));
  }
  Vec out(n);
  for (int s = 0; s < n; ++s) out(s) = rel(((s - q) % n + n) % n);
  return out;
}

long sector2_dim(const PolaronSolution& sol) {
  long m = sol.f_k.size();
  return m + m * (m + 1) / 2;
}

namespace {

// pack/unpack between the orthonormal sector-2 coordinates and the
// symmetric pair amplitude psi (state = sum_k u_k s+ a_k^+ |0;0>
//                                + 1/2 sum_kp psi_kp a_k^+ a_p^+ |0;0>)
void unpack2(const RVec& v, int m, RVec& u, RMat& psi) {
  u = v.head(m);
  psi.resize(m, m);
  int idx = m;
  const double rt2 = std::numbers::sqrt2;
  for (int k = 0; k < m; ++k)
    for (int p = k; p < m; ++p, ++idx) {
      double c = v(idx);
      if (p == k) {
        psi(k, k) = rt2 * c;
      } else {
        psi(k, p) = psi(p, k) = c;
      }
    }
}

RVec pack2(const RVec& u, const RMat& psi) {
  const int m = static_cast<int>(u.size());
  RVec v(m + m * (m + 1) / 2);
  v.head(m) = u;
  int idx = m;
  const double rt2 = std::numbers::sqrt2;
  for (int k = 0; k < m; ++k)
    for (int p = k; p < m; ++p, ++idx)
      v(idx) = (p == k) ? psi(k, k) / rt2 : psi(k, p);
  return v;
}

}  // namespace

RVec sector2_matvec(const PolaronSolution& sol, const RVec& v) {
  const int m = static_cast<int>(sol.f_k.size());
  if (v.size() != sector2_dim(sol))
    throw std::invalid_argument("sector2_matvec: wrong vector length");
  const RVec& f = sol.f_k;
  const RVec& w = sol.modes.omega;
  const double dr = sol.delta_r;
  const double e0 = sol.e_gs;

  RVec u;
  RMat psi;
  unpack2(v, m, u, psi);

  RVec psif = psi * f;
  RVec up = ((w.array() + dr + e0) * u.array()).matrix();
  up -= 2.0 * dr * (f.dot(u)) * f;
  up -= 2.0 * dr * psif;

  RMat psip(m, m);
  for (int k = 0; k < m; ++k)
    for (int p = 0; p < m; ++p)
      psip(k, p) = (w(k) + w(p) + e0) * psi(k, p);
  psip += 2.0 * dr * (f * psif.transpose() + psif * f.transpose());
  psip -= 2.0 * dr * (f * u.transpose() + u * f.transpose());

  return pack2(up, psip);
}

RMat projected_sector_matrix(const PolaronSolution& sol, int n_exc,
                             long max_dim) {
  const int m = static_cast<int>(sol.f_k.size());
  const RVec& f = sol.f_k;
  const RVec& w = sol.modes.omega;
  const double dr = sol.delta_r;
  const double e0 = sol.e_gs;

  if (n_exc == 1) {
    RMat h = RMat::Zero(m + 1, m + 1);
    h(0, 0) = dr;
    for (int k = 0; k < m; ++k) {
      h(0, k + 1) = h(k + 1, 0) = -2.0 * dr * f(k);
      for (int p = 0; p < m; ++p) h(k + 1, p + 1) = 2.0 * dr * f(k) * f(p);
      h(k + 1, k + 1) += w(k);
    }
    h.diagonal().array() += e0;
    return h;
  }
  if (n_exc == 2) {
    long dim = sector2_dim(sol);
    if (dim > max_dim)
      throw std::length_error(
          "projected_sector_matrix: sector-2 dimension " +
          std::to_string(dim) + " exceeds cap " + std::to_string(max_dim) +
          "; use sector2_matvec");
    RMat h(dim, dim);
    RVec e = RVec::Zero(dim);
    for (long j = 0; j < dim; ++j) {
      e(j) = 1.0;
      h.col(j) = sector2_matvec(sol, e);
      e(j) = 0.0;
    }
    return h;
  }
  throw std::invalid_argument("projected_sector_matrix: n_exc must be 1 or 2");
}

std::pair<double, double> bound_state_energies(const PolaronSolution& sol) {
  RMat h1 = projected_sector_matrix(sol, 1, 1000000);
  Eigen::SelfAdjointEigenSolver<RMat> es(h1, Eigen::EigenvaluesOnly);
  double e1 = es.eigenvalues()(0);

  long dim = sector2_dim(sol);
  double e2 = lanczos_lowest(
      [&sol](const RVec& v) { return sector2_matvec(sol, v); },
      static_cast<int>(dim));
  return {e1, e2};
}

}  // namespace vq
