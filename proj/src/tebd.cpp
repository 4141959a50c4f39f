#include "vq/tebd.hpp"

#include <cmath>
#include <stdexcept>

namespace vq {

void Numerics::validate() const {
  if (n_max < 1) throw std::invalid_argument("numerics: n_max must be >= 1");
  if (d_max < 1) throw std::invalid_argument("numerics: d_max must be >= 1");
  if (svd_tol < 0) throw std::invalid_argument("numerics: svd_tol must be >= 0");
  if (dt <= 0) throw std::invalid_argument("numerics: dt must be > 0");
  if (trotter_order != 2 && trotter_order != 4)
    throw std::invalid_argument("numerics: trotter_order must be 2 or 4");
  if (energy_tol <= 0)
    throw std::invalid_argument("numerics: energy_tol must be > 0");
}

std::vector<Mat> bond_hamiltonians(const LocalTerms& terms) {
  const int n = static_cast<int>(terms.dims.size());
  std::vector<Mat> h(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const int dl = terms.dims[i], dr = terms.dims[i + 1];
    double wl = (i == 0) ? 1.0 : 0.5;
    double wr = (i + 1 == n - 1) ? 1.0 : 0.5;
    h[i] = terms.bond_ops[i];
    h[i] += wl * kron(terms.site_ops[i], Mat::Identity(dr, dr));
    h[i] += wr * kron(Mat::Identity(dl, dl), terms.site_ops[i + 1]);
  }
  return h;
}

std::vector<Mat> bond_gates(const std::vector<Mat>& bond_h, cxd scale) {
  std::vector<Mat> g(bond_h.size());
  for (size_t i = 0; i < bond_h.size(); ++i)
    g[i] = hermitian_exp(bond_h[i], scale);
  return g;
}

TrotterStepper::TrotterStepper(const LocalTerms& terms, cxd scale, int order,
                               int d_max, double svd_tol)
    : d_max_(d_max), svd_tol_(svd_tol) {
  std::vector<Mat> h = bond_hamiltonians(terms);
  auto strang = [&](cxd s) {
    passes_.push_back({bond_gates(h, s / 2.0), true});
    passes_.push_back({bond_gates(h, s), false});
    passes_.push_back({bond_gates(h, s / 2.0), true});
  };
  if (order == 2) {
    strang(scale);
  } else if (order == 4) {
    const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
    const double w0 = 1.0 - 2.0 * w1;
    strang(scale * w1);
    strang(scale * w0);
    strang(scale * w1);
  } else {
    throw std::invalid_argument("TrotterStepper: order must be 2 or 4");
  }
}

double TrotterStepper::sweep(Mps& state, const std::vector<Mat>& gates,
                             bool even) const {
  double discarded = 0.0;
  const int n = state.size();
  for (int i = even ? 0 : 1; i + 1 < n; i += 2) {
    state.canonicalize(i);
    discarded += state.apply_two_site_gate(gates[i], i, d_max_, svd_tol_, true);
  }
  return discarded;
}

StepResult TrotterStepper::step(Mps& state) const {
  StepResult res;
  for (const auto& pass : passes_)
    res.discarded += sweep(state, pass.gates, pass.even);
  double nrm = state.norm();
  res.norm_correction = std::abs(1.0 - nrm);
  state.scale(1.0 / nrm);
  return res;
}

EnergyEvaluator::EnergyEvaluator(const LocalTerms& terms) : dims_(terms.dims) {
  const int n = static_cast<int>(dims_.size());
  site_entries_.resize(n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < dims_[i]; ++r)
      for (int c = 0; c < dims_[i]; ++c)
        if (terms.site_ops[i](r, c) != 0.0)
          site_entries_[i].push_back({r, c, terms.site_ops[i](r, c)});
  bond_entries_.resize(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    const int dl = dims_[i], dr = dims_[i + 1];
    for (int slb = 0; slb < dl; ++slb)
      for (int srb = 0; srb < dr; ++srb)
        for (int slk = 0; slk < dl; ++slk)
          for (int srk = 0; srk < dr; ++srk) {
            cxd v = terms.bond_ops[i](slb * dr + srb, slk * dr + srk);
            if (v != 0.0) bond_entries_[i].push_back({slb, srb, slk, srk, v});
          }
  }
}

double EnergyEvaluator::operator()(const Mps& state) const {
  Mps st = state;  // gauge moves only
  st.canonicalize(0);
  const int n = st.size();
  cxd total = 0.0;
  for (int i = 0; i < n; ++i) {
    st.canonicalize(i);
    for (const auto& e : site_entries_[i])
      total += e.v * (st.tensor(i, e.r).adjoint() * st.tensor(i, e.c)).trace();
    if (i + 1 < n && !bond_entries_[i].empty()) {
      const int dl = dims_[i];
      std::vector<Mat> pair_env(dl * dl);
      std::vector<bool> have(dl * dl, false);
      for (const auto& e : bond_entries_[i]) {
        int key = e.slb * dl + e.slk;
        if (!have[key]) {
          pair_env[key] = st.tensor(i, e.slb).adjoint() * st.tensor(i, e.slk);
          have[key] = true;
        }
        total += e.v * (st.tensor(i + 1, e.srb).adjoint() * pair_env[key] *
                        st.tensor(i + 1, e.srk))
                           .trace();
      }
    }
  }
  if (std::abs(total.imag()) > 1e-8 * std::max(1.0, std::abs(total.real())))
    throw std::runtime_error("energy: expectation not real");
  return total.real();
}

double energy(const Mps& state, const LocalTerms& terms) {
  return EnergyEvaluator(terms)(state);
}

}  // namespace vq
