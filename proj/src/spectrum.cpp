#include "vq/spectrum.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>

namespace vq {

namespace {

Mat photon_phase(int n_max, cxd phase_unit) {
  Mat m = Mat::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) m(n, n) = std::pow(phase_unit, n);
  return m;
}

std::vector<int> vacuum_spec(const std::vector<int>& dims) {
  return std::vector<int>(dims.size(), 0);
}

}  // namespace

ProductOperator parity_operator(const ModelParams& p, int n_max) {
  LocalTerms t = local_terms(p, n_max);
  ProductOperator op;
  op.ops.resize(t.dims.size());
  Mat cavity = photon_phase(n_max, -1.0);
  Mat qubit_phase = Mat::Zero(2, 2);
  qubit_phase(0, 0) = 1.0;
  qubit_phase(1, 1) = -1.0;
  for (int i = 0; i < p.n_sites; ++i)
    op.ops[i] = (i == p.qubit()) ? fused_op(qubit_phase, cavity) : cavity;
  return op;
}

ProductOperator counting_phase_operator(const ModelParams& p, int n_max,
                                         double theta, bool count_qubit) {
  ProductOperator op;
  op.ops.resize(p.n_sites);
  Mat cavity = photon_phase(n_max, std::exp(cxd(0.0, theta)));
  Mat qubit = Mat::Identity(2, 2);
  if (count_qubit) qubit(1, 1) = std::exp(cxd(0.0, theta));
  for (int i = 0; i < p.n_sites; ++i)
    op.ops[i] = (i == p.qubit()) ? fused_op(qubit, cavity) : cavity;
  return op;
}

double project_parity(Mps& state, const ProductOperator& parity, int sign,
                      int d_max, double svd_tol) {
  Mps flipped = state;
  flipped.apply_product_operator(parity);
  if (sign < 0) flipped.scale(-1.0);
  Mps sum = Mps::add(state, flipped);
  sum.compress(d_max, svd_tol);
  double nrm = sum.norm() / 2.0;
  if (nrm < 1e-12)
    throw std::runtime_error(
        "project_parity: projected norm collapsed; the start state has no "
        "component in this parity sector -- retry with a new randomized start");
  sum.scale(1.0 / sum.norm());
  state = std::move(sum);
  return nrm;
}

RVec photon_histogram(const Mps& state, const ModelParams& p, int n_max,
                      int n_cut, bool count_qubit) {
  const int m = n_cut + 1;
  Vec charfun(m);
  for (int j = 0; j < m; ++j) {
    double theta = 2.0 * std::numbers::pi * j / m;
    charfun(j) = state.expect_product_operator(
        counting_phase_operator(p, n_max, theta, count_qubit));
  }
  RVec hist(m);
  for (int n = 0; n < m; ++n) {
    cxd acc = 0.0;
    for (int j = 0; j < m; ++j)
      acc += std::exp(cxd(0.0, -2.0 * std::numbers::pi * n * j / m)) * charfun(j);
    acc /= double(m);
    if (std::abs(acc.imag()) > 1e-8)
      throw std::runtime_error("photon_histogram: non-real weight");
    hist(n) = std::max(0.0, acc.real());
  }
  if (hist(n_cut) > 1e-3)
    throw std::runtime_error(
        "photon_histogram: weight at n_cut exceeds 1e-3, support is aliased; "
        "increase n_cut");
  return hist;
}

RVec spatial_profile(const Mps& state, const ModelParams& p, int n_max) {
  std::vector<Mat> ops(p.n_sites);
  Mat num = boson_number(n_max);
  for (int i = 0; i < p.n_sites; ++i)
    ops[i] = (i == p.qubit()) ? fused_op(Mat::Identity(2, 2), num) : num;
  Vec vals = state.local_expectations(ops);
  return vals.real();
}

double qubit_population(const Mps& state, const ModelParams& p, int n_max) {
  Mat sp_sm = qubit_sigma_minus().adjoint() * qubit_sigma_minus();
  Mat op = fused_op(sp_sm, Mat::Identity(n_max + 1, n_max + 1));
  return state.expect_local(p.qubit(), op).real();
}

EigenRecord find_eigenstate(const ModelParams& p, const Numerics& num,
                            int parity_sector,
                            const std::vector<const Mps*>& orthogonal_to,
                            const EigenSearchOptions& opts) {
  p.validate();
  num.validate();
  if (parity_sector != 1 && parity_sector != -1)
    throw std::invalid_argument("find_eigenstate: parity sector must be +-1");

  LocalTerms terms = local_terms(p, num.n_max);
  EnergyEvaluator eval(terms);
  ProductOperator parity = parity_operator(p, num.n_max);

  Mps state;
  if (opts.initial != nullptr) {
    state = *opts.initial;
  } else if (parity_sector == +1 && orthogonal_to.empty()) {
    state = Mps::product_state(terms.dims, vacuum_spec(terms.dims));
  } else {
    // photon(s) on the fused qubit site plus a small seeded perturbation
    std::vector<int> spec = vacuum_spec(terms.dims);
    spec[p.qubit()] = (parity_sector == -1) ? 1 : 2;
    Mps base = Mps::product_state(terms.dims, spec);
    Mps noise = Mps::random_state(terms.dims, 2, num.seed);
    noise.scale(0.05);
    state = Mps::add(base, noise);
    state.compress(num.d_max, num.svd_tol);
    state.normalize();
  }

  auto restore = [&](Mps& st) {
    project_parity(st, parity, parity_sector, num.d_max, num.svd_tol);
    if (!orthogonal_to.empty()) {
      Mps acc = st;
      for (const Mps* o : orthogonal_to) {
        cxd c = Mps::overlap(*o, acc);
        Mps sub = *o;
        sub.scale(-c);
        acc = Mps::add(acc, sub);
        acc.compress(num.d_max, num.svd_tol);
      }
      if (acc.norm() < 1e-12)
        throw std::runtime_error(
            "find_eigenstate: state collapsed under orthogonalization -- "
            "retry with a new randomized start");
      acc.normalize();
      st = std::move(acc);
    }
  };
  restore(state);

  double e = eval(state);
  double dt = opts.dt_start;
  while (dt >= opts.dt_min * (1.0 - 1e-12)) {
    TrotterStepper stepper(terms, cxd(-dt, 0.0), num.trotter_order, num.d_max,
                           num.svd_tol);
    double e_prev = e;
    for (int it = 0; it < opts.max_steps_per_dt; ++it) {
      StepResult sr = stepper.step(state);
      restore(state);
      e = eval(state);
      if (e > e_prev + std::max(1e-8, 100.0 * sr.discarded))
        std::cerr << "find_eigenstate: non-monotone energy at dt=" << dt
                  << " (dE=" << e - e_prev
                  << ", discarded=" << sr.discarded << ")\n";
      if (std::abs(e - e_prev) < num.energy_tol * dt) break;
      e_prev = e;
    }
    dt *= opts.dt_factor;
  }

  EigenRecord rec;
  rec.parity = parity_sector;
  rec.energy = e;
  rec.state = std::move(state);
  rec.n_x_profile = spatial_profile(rec.state, p, num.n_max);
  rec.histogram = photon_histogram(rec.state, p, num.n_max);
  double pi_val = rec.state.expect_product_operator(parity).real();
  if (std::abs(pi_val - parity_sector) > 1e-6)
    throw std::runtime_error("find_eigenstate: converged state has impure parity");
  if (parity_sector == -1)
    rec.label = "E1";
  else
    rec.label = orthogonal_to.empty() ? "GS" : "E2";
  return rec;
}

}  // namespace vq
