#pragma once

#include <vector>

#include "vq/model.hpp"
#include "vq/mps.hpp"

namespace vq {

struct Numerics {
  int n_max = 5;
  int d_max = 20;
  double svd_tol = 1e-12;    // relative discarded weight per SVD
  double dt = 0.05;
  int trotter_order = 2;     // 2 (Strang) or 4 (Suzuki composition)
  double energy_tol = 1e-8;  // imaginary-time stop: |dE| per unit time
  std::uint64_t seed = 1234;

  void validate() const;
};

/// Bond Hamiltonians h_i on (i, i+1): bond term plus the adjacent site terms
/// with 1/2 weights (full weight at the chain ends).
std::vector<Mat> bond_hamiltonians(const LocalTerms& terms);

/// exp(scale * h_i) for every bond; scale = -i*dt (real time) or -dt.
std::vector<Mat> bond_gates(const std::vector<Mat>& bond_h, cxd scale);

struct StepResult {
  double discarded = 0.0;        // summed relative discarded weight
  double norm_correction = 0.0;  // |1 - norm| absorbed by renormalization
};

/// One full Trotter step (even/odd sweeps), state renormalized afterwards.
/// `gates_half` are exp(scale/2 * h); for order 4 the composition coefficients
/// are handled internally and `bond_h` is re-exponentiated lazily by caller
/// via precomputed gate sets.
class TrotterStepper {
 public:
  TrotterStepper(const LocalTerms& terms, cxd scale, int order, int d_max,
                 double svd_tol);
  StepResult step(Mps& state) const;

 private:
  struct Pass {
    std::vector<Mat> gates;  // per bond
    bool even;
  };
  std::vector<Pass> passes_;
  int d_max_;
  double svd_tol_;
  double sweep(Mps& state, const std::vector<Mat>& gates, bool even) const;
};

/// Precomputed sparse entry lists for fast repeated <H> evaluation.
class EnergyEvaluator {
 public:
  explicit EnergyEvaluator(const LocalTerms& terms);
  /// <H> for a normalized state (center sweep, O(N)).
  double operator()(const Mps& state) const;

 private:
  struct SiteEntry {
    int r, c;
    cxd v;
  };
  struct BondEntry {
    int slb, srb, slk, srk;
    cxd v;
  };
  std::vector<std::vector<SiteEntry>> site_entries_;
  std::vector<std::vector<BondEntry>> bond_entries_;
  std::vector<int> dims_;
};

/// <H> for a normalized state, one O(N) pass.
double energy(const Mps& state, const LocalTerms& terms);

}  // namespace vq
