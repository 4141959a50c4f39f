#pragma once

#include <vector>

#include "vq/linalg.hpp"
#include "vq/model.hpp"

namespace vq {

/// A finite set of bosonic modes with their couplings to the emitter.
/// Default is the periodic momentum grid; the exact-diagonalization
/// cross-checks use the open-chain eigenmodes of the same finite lattice.
struct ModeBasis {
  RVec omega;  // mode energies
  RVec g;      // mode couplings (real)

  static ModeBasis periodic(const ModelParams& p);
  static ModeBasis open_chain(const ModelParams& p);
};

struct PolaronSolution {
  ModelParams params;
  ModeBasis modes;
  RVec f_k;          // variational amplitudes, real
  double delta_r;    // renormalized gap
  double e_gs;       // variational ground energy
  int iterations;
  double residual;
};

/// Damped fixed-point iteration on the coupled equations
/// f_k = g_k/(delta_r + omega_k), delta_r = delta exp(-2 sum f_k^2).
PolaronSolution solve_polaron(const ModelParams& p, double tol = 1e-12,
                              int max_iter = 10000, double damping = 0.5);
PolaronSolution solve_polaron(const ModelParams& p, const ModeBasis& modes,
                              double tol = 1e-12, int max_iter = 10000,
                              double damping = 0.5);

/// P_e = (1 - delta_r/delta)/2; throws for delta = 0.
double excited_probability(const PolaronSolution& sol);

/// Overlap of polaron and bare ground states, exp(-sum f_k^2).
double fidelity_to_bare(const PolaronSolution& sol);

/// f_x = (1/sqrt(N)) sum_j exp(i 2 pi j x / N) f_j, x relative to the qubit.
/// Entry x of the result is lattice site x; the profile peaks at the qubit.
Vec polaron_fx(const PolaronSolution& sol);

/// Polaron Hamiltonian restricted to n_exc total excitations (1 or 2),
/// in an orthonormal sector basis, absolute energies (e_gs offset included).
/// n_exc = 1 basis: {qubit excited} + {one photon per mode}.
/// n_exc = 2 basis: {qubit + photon k} + {photon pairs k <= p}.
RMat projected_sector_matrix(const PolaronSolution& sol, int n_exc,
                             long max_dim = 20000);

/// Matvec of the n_exc = 2 sector without assembling the matrix.
RVec sector2_matvec(const PolaronSolution& sol, const RVec& v);
long sector2_dim(const PolaronSolution& sol);

/// (E1, E2): lowest eigenvalues of the one- and two-excitation sectors.
std::pair<double, double> bound_state_energies(const PolaronSolution& sol);

}  // namespace vq
