#pragma once

#include <string>
#include <vector>

#include "vq/mps.hpp"
#include "vq/tebd.hpp"

namespace vq {

struct EigenRecord {
  std::string label;  // GS, E1, E2
  double energy = 0.0;
  int parity = +1;
  Mps state;
  RVec n_x_profile;
  RVec histogram;  // P(n_ph), n_ph = 0..n_cut
};

/// Pi = (-1)^(qubit + total photon number) as a product operator.
ProductOperator parity_operator(const ModelParams& p, int n_max);

/// Phase string exp(i theta n_photons) per cavity (qubit excluded unless
/// count_qubit, which counts total excitations instead).
ProductOperator counting_phase_operator(const ModelParams& p, int n_max,
                                        double theta, bool count_qubit = false);

struct EigenSearchOptions {
  double dt_start = 0.1;
  double dt_min = 1e-3;
  double dt_factor = 0.5;
  int max_steps_per_dt = 4000;
  const Mps* initial = nullptr;  // overrides the default start
};

/// Lowest eigenstate in a parity sector by projected imaginary-time TEBD,
/// Gram-Schmidt-orthogonalized against `orthogonal_to` after every step.
EigenRecord find_eigenstate(const ModelParams& p, const Numerics& num,
                            int parity_sector,
                            const std::vector<const Mps*>& orthogonal_to = {},
                            const EigenSearchOptions& opts = {});

/// P(n_ph) from the photon-number characteristic function on n_cut+1 points.
/// count_qubit switches to total-excitation counting, under which parity
/// eigenstates have support on a single number parity.
RVec photon_histogram(const Mps& state, const ModelParams& p, int n_max,
                      int n_cut = 8, bool count_qubit = false);

/// Per-site <a_x^+ a_x>.
RVec spatial_profile(const Mps& state, const ModelParams& p, int n_max);

/// Qubit excited-state population <sigma+ sigma->.
double qubit_population(const Mps& state, const ModelParams& p, int n_max);

/// Projects onto the (1 + sign*Pi)/2 parity sector and renormalizes.
/// Returns the norm of the projected component (pre-normalization).
double project_parity(Mps& state, const ProductOperator& parity, int sign,
                      int d_max, double svd_tol);

}  // namespace vq
