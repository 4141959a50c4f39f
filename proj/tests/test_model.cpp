#include <cmath>
#include <numbers>

#include "doctest.h"
#include "helpers.hpp"
#include "vq/model.hpp"
#include "vq/polaron.hpp"
#include "vq/spectrum.hpp"

using namespace vq;
constexpr double pi = std::numbers::pi;

TEST_CASE("dispersion values") {
  ModelParams p;  // omega=1, J=0.4
  CHECK(dispersion(p, 0.0) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(dispersion(p, pi / 2) == doctest::Approx(1.0).epsilon(1e-14));
  ModelParams wide = p;
  wide.omega = 1.8;
  CHECK(dispersion(wide, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("dispersion extremes and group velocity on the grid") {
  ModelParams p;
  p.n_sites = 128;
  BandInfo b = band_info(p);
  CHECK(b.v_max == 2 * p.j_hop);
  CHECK(b.momenta.size() == p.n_sites);
  double lo = 1e30, hi = -1e30, vmax = 0.0;
  for (int i = 0; i < p.n_sites; ++i) {
    double w = dispersion(p, b.momenta(i));
    lo = std::min(lo, w);
    hi = std::max(hi, w);
    if (i > 0) {
      double dk = b.momenta(i) - b.momenta(i - 1);
      vmax = std::max(vmax, std::abs(w - dispersion(p, b.momenta(i - 1))) / dk);
    }
  }
  CHECK(lo == doctest::Approx(b.gap_bottom).epsilon(1e-3));
  CHECK(hi == doctest::Approx(b.band_top).epsilon(1e-3));
  CHECK(vmax <= b.v_max + 1e-9);
}

TEST_CASE("momentum couplings are flat g/sqrt(N)") {
  ModelParams p;
  p.n_sites = 400;
  p.g = 0.0;
  CHECK(coupling_gk(p).cwiseAbs().maxCoeff() == 0.0);
  p.g = 0.5;
  RVec gk = coupling_gk(p);
  CHECK(gk.size() == 400);
  CHECK(gk.minCoeff() == doctest::Approx(0.025).epsilon(1e-14));
  CHECK(gk.maxCoeff() == doctest::Approx(0.025).epsilon(1e-14));
  ModelParams q;
  q.n_sites = 16;
  q.g = 0.4;
  CHECK(coupling_gk(q)(0) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("golden-rule decay time") {
  ModelParams p;  // delta=0.3 inside the band
  auto tau = decay_time_tau(p);
  REQUIRE(tau.has_value());
  double expected = p.j_hop * std::sin(std::acos((p.omega - p.delta) /
                                                 (2 * p.j_hop))) /
                    (p.g * p.g);
  CHECK(*tau == doctest::Approx(expected).epsilon(1e-14));
  CHECK(*tau == doctest::Approx(0.7746).epsilon(1e-4));

  p.delta = 1.0;  // band centre, sin k0 = 1
  CHECK(*decay_time_tau(p) == doctest::Approx(1.6).epsilon(1e-14));

  p.omega = 1.8;
  p.delta = 0.3;  // below the gap
  CHECK_FALSE(decay_time_tau(p).has_value());

  p.omega = 1.0;
  p.g = 0.0;
  CHECK_THROWS(decay_time_tau(p));
}

TEST_CASE("local terms: decoupled limit conserves photon number") {
  ModelParams p;
  p.n_sites = 4;
  p.qubit_site = 2;
  p.g = 0.0;
  Mat h = dense_hamiltonian(p, 1);
  // total photon number operator in the same basis
  LocalTerms t = local_terms(p, 1);
  long dim = 1;
  for (int d : t.dims) dim *= d;
  Mat nph = Mat::Zero(dim, dim);
  {
    Mat left = Mat::Identity(1, 1);
    for (int i = 0; i < p.n_sites; ++i) {
      Mat op = (i == p.qubit()) ? fused_op(Mat::Identity(2, 2), boson_number(1))
                                : boson_number(1);
      Mat full = kron(left, op);
      long right = dim / full.rows();
      nph += kron(full, Mat::Identity(right, right));
      left = kron(left, Mat::Identity(op.rows(), op.rows()));
    }
  }
  CHECK((h * nph - nph * h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("dense assembly dimension and hermiticity") {
  ModelParams p;
  p.n_sites = 4;
  p.qubit_site = 2;
  Mat h = dense_hamiltonian(p, 1);
  CHECK(h.rows() == 32);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(dense_hamiltonian(p, 20));  // over the dimension cap
}

TEST_CASE("photon-vacuum block of the fused site is diag(0, delta)") {
  ModelParams p;
  p.n_sites = 4;
  p.qubit_site = 2;
  LocalTerms t = local_terms(p, 1);
  const Mat& s = t.site_ops[p.qubit()];  // index = sigma*(n_max+1) + n
  CHECK(std::abs(s(0, 0)) < 1e-15);
  CHECK(s(2, 2).real() == doctest::Approx(p.delta).epsilon(1e-14));
  CHECK(std::abs(s(2, 0)) < 1e-15);  // coupling flips qubit AND photon
  CHECK(std::abs(s(3, 0) - p.g) < 1e-15);
}

TEST_CASE("decoupled spectrum matches analytic open-chain energies") {
  ModelParams p;
  p.n_sites = 4;
  p.qubit_site = 2;
  p.g = 0.0;
  Mat h = dense_hamiltonian(p, 1);
  auto eig = testutil::dense_eig(h);
  // single-particle energies of the open chain
  std::vector<double> expected = {0.0, p.delta};
  for (int q = 1; q <= p.n_sites; ++q)
    expected.push_back(p.omega -
                       2 * p.j_hop * std::cos(q * pi / (p.n_sites + 1)));
  // the many-body spectrum interleaves sums of these, so check each
  // single-excitation energy appears rather than comparing by index
  for (double e : expected) {
    double best = 1e30;
    for (long i = 0; i < eig.values.size(); ++i)
      best = std::min(best, std::abs(eig.values(i) - e));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("dense ground energy vs independent iterative eigensolver") {
  ModelParams p;
  p.n_sites = 6;
  p.qubit_site = 3;
  p.g = 0.3;
  Mat h = dense_hamiltonian(p, 2);
  double e_dense = testutil::dense_eig(h).values(0);
  RMat hr = h.real();  // all couplings are real
  double e_iter = lanczos_lowest(
      [&](const RVec& v) { return RVec(hr * v); }, static_cast<int>(h.rows()));
  CHECK(e_dense == doctest::Approx(e_iter).epsilon(1e-10));
}

TEST_CASE("dense ED ground energy matches imaginary-time MPS") {
  ModelParams p;
  p.n_sites = 4;
  p.qubit_site = 2;
  p.g = 0.3;
  double e_ed = testutil::dense_eig(dense_hamiltonian(p, 2)).values(0);
  Numerics num;
  num.n_max = 2;
  num.d_max = 16;
  EigenRecord gs = testutil::tight_eigenstate(p, num, +1);
  CHECK(std::abs(gs.energy - e_ed) < 1e-8);
}

TEST_CASE("parity commutes with the dense Hamiltonian") {
  ModelParams p;
  p.n_sites = 6;
  p.qubit_site = 3;
  Mat h = dense_hamiltonian(p, 2);
  RVec par = dense_parity_diagonal(p, 2);
  double worst = 0.0;  // [H, Pi]_{ij} = H_ij (pi_j - pi_i)
  for (long i = 0; i < h.rows(); ++i)
    for (long j = 0; j < h.cols(); ++j)
      worst = std::max(worst, std::abs(h(i, j)) * std::abs(par(j) - par(i)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("parameter validation") {
  ModelParams p;
  p.g = -0.1;
  CHECK_THROWS(p.validate());
  ModelParams q;
  q.n_sites = 5;
  CHECK_THROWS(q.validate());
  ModelParams r;
  r.omega = 0.5;  // band bottom below zero
  CHECK_THROWS(r.validate());
  ModelParams ok;
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.qubit() == ok.n_sites / 2);
}
