#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "vq/model.hpp"
#include "vq/polaron.hpp"
#include "vq/spectrum.hpp"

using namespace vq;

namespace {

ModelParams small_params(int n = 6) {
  ModelParams p;
  p.n_sites = n;
  p.qubit_site = n / 2;
  return p;
}

Mps vacuum_state(const ModelParams& p, int n_max) {
  auto d = local_terms(p, n_max).dims;
  return Mps::product_state(d, std::vector<int>(d.size(), 0));
}

}  // namespace

TEST_CASE("parity eigenvalues on product states") {
  ModelParams p = small_params();
  int n_max = 2;
  auto d = local_terms(p, n_max).dims;
  ProductOperator pi = parity_operator(p, n_max);

  Mps vac = vacuum_state(p, n_max);
  CHECK(vac.expect_product_operator(pi).real() == doctest::Approx(1.0));

  std::vector<int> one(d.size(), 0);
  one[0] = 1;
  CHECK(Mps::product_state(d, one).expect_product_operator(pi).real() ==
        doctest::Approx(-1.0));

  std::vector<int> both(d.size(), 0);
  both[p.qubit()] = n_max + 2;  // sigma = 1, n = 1: two excitations
  CHECK(Mps::product_state(d, both).expect_product_operator(pi).real() ==
        doctest::Approx(1.0));

  // Pi^2 = identity
  Mps twice = vac;
  twice.apply_product_operator(pi);
  twice.apply_product_operator(pi);
  CHECK(std::abs(Mps::overlap(twice, vac) - 1.0) < 1e-14);
}

TEST_CASE("decoupled even-sector search lands on the vacuum") {
  ModelParams p = small_params();
  p.g = 0.0;
  Numerics num;
  num.n_max = 2;
  num.d_max = 8;
  EigenRecord gs = find_eigenstate(p, num, +1);
  CHECK(std::abs(gs.energy) < 1e-8);
  CHECK(gs.parity == 1);
  CHECK(gs.n_x_profile.cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("sector minima match dense ED blocks") {
  ModelParams p = small_params();
  p.g = 0.3;
  Mat h = dense_hamiltonian(p, 2);
  RVec par = dense_parity_diagonal(p, 2);
  double ed_even = testutil::dense_parity_minimum(h, par, +1);
  double ed_odd = testutil::dense_parity_minimum(h, par, -1);

  Numerics num;
  num.n_max = 2;
  num.d_max = 16;
  EigenRecord gs = testutil::tight_eigenstate(p, num, +1);
  EigenRecord e1 = testutil::tight_eigenstate(p, num, -1);
  CHECK(std::abs(gs.energy - ed_even) < 1e-6);
  CHECK(std::abs(e1.energy - ed_odd) < 1e-6);
  CHECK(std::abs(gs.state.expect_product_operator(parity_operator(p, 2)) -
                 1.0) < 1e-6);
  CHECK(std::abs(e1.state.expect_product_operator(parity_operator(p, 2)) +
                 1.0) < 1e-6);
}

TEST_CASE("eigenstate trio: ordering, orthogonality, band-edge bound") {
  ModelParams p = small_params(8);
  p.g = 0.4;
  Numerics num;
  num.n_max = 2;
  num.d_max = 16;
  EigenRecord gs = find_eigenstate(p, num, +1);
  EigenRecord e1 = find_eigenstate(p, num, -1);
  EigenRecord e2 = find_eigenstate(p, num, +1, {&gs.state});
  CHECK(gs.energy <= e1.energy);
  CHECK(e1.energy <= e2.energy);
  CHECK(std::abs(Mps::overlap(gs.state, e2.state)) <= 1e-6);
  // bound state sits below the one-photon band edge (finite-size slack)
  CHECK(e1.energy <= gs.energy + (p.omega - 2 * p.j_hop) + 0.35);
  CHECK(gs.histogram.sum() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(gs.histogram.minCoeff() >= 0.0);
}

TEST_CASE("histogram: vacuum and projector cross-check") {
  ModelParams p = small_params(4);
  int n_max = 2;
  Mps vac = vacuum_state(p, n_max);
  RVec h0 = photon_histogram(vac, p, n_max);
  CHECK(h0(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h0.tail(h0.size() - 1).cwiseAbs().maxCoeff() < 1e-12);

  // converged ground state, photon distribution by explicit dense projectors
  p.g = 0.4;
  Numerics num;
  num.n_max = n_max;
  num.d_max = 16;
  EigenRecord gs = testutil::tight_eigenstate(p, num, +1);
  Vec dense = testutil::mps_to_dense(gs.state);
  auto dims = gs.state.local_dims();
  RVec by_projector = RVec::Zero(9);
  for (long idx = 0; idx < dense.size(); ++idx) {
    long rem = idx;
    int nph = 0;
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      int s = static_cast<int>(rem % dims[i]);
      rem /= dims[i];
      nph += (i == p.qubit()) ? s % (n_max + 1) : s;
    }
    by_projector(nph) += std::norm(dense(idx));
  }
  RVec by_charfun = photon_histogram(gs.state, p, n_max);
  CHECK((by_charfun - by_projector).cwiseAbs().maxCoeff() < 1e-8);

  // total-excitation counting puts an even state entirely on even numbers
  RVec total = photon_histogram(gs.state, p, n_max, 8, true);
  double odd = total(1) + total(3) + total(5) + total(7);
  CHECK(odd < 1e-6);
}

TEST_CASE("histogram aliasing is detected") {
  ModelParams p = small_params(4);
  int n_max = 3;
  auto d = local_terms(p, n_max).dims;
  std::vector<int> loaded = {3, 3, 3, 0};  // 9 photons, aliases onto n = 4
  Mps full = Mps::product_state(d, loaded);
  CHECK_THROWS(photon_histogram(full, p, n_max, 4));
}

TEST_CASE("spatial profiles: localization and detuning trend") {
  ModelParams p = small_params(12);
  p.g = 0.4;
  Numerics num;
  num.n_max = 2;
  num.d_max = 12;
  double prev_central = 1e30;
  for (double delta : {0.3, 1.0, 10.0}) {
    p.delta = delta;
    EigenRecord gs = find_eigenstate(p, num, +1);
    double central = gs.n_x_profile(p.qubit());
    CHECK(central < prev_central);
    prev_central = central;
    // cloud decays away from the emitter
    CHECK(gs.n_x_profile(p.qubit()) > gs.n_x_profile(1));
  }
}

TEST_CASE("projection collapse raises an actionable error") {
  ModelParams p = small_params(4);
  int n_max = 1;
  Mps vac = vacuum_state(p, n_max);
  ProductOperator pi = parity_operator(p, n_max);
  Mps v = vac;
  CHECK_THROWS(project_parity(v, pi, -1, 16, 0.0));  // vacuum has no odd part
}
