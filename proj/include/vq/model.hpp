#pragma once

#include <optional>
#include <vector>

#include "vq/linalg.hpp"

namespace vq {

/// Physical constants of the cavity array + two-level emitter.
struct ModelParams {
  double omega = 1.0;   // resonator frequency
  double j_hop = 0.4;   // nearest-neighbour hopping J
  int n_sites = 96;     // lattice length N, even
  double delta = 0.3;   // emitter gap
  double g = 0.5;       // coupling strength
  int qubit_site = -1;  // coupled cavity, defaults to N/2

  void validate() const;
  int qubit() const { return qubit_site < 0 ? n_sites / 2 : qubit_site; }
};

struct BandInfo {
  double gap_bottom;   // omega - 2J
  double band_top;     // omega + 2J
  double v_max;        // 2J
  RVec momenta;        // N values in [-pi, pi)
};

BandInfo band_info(const ModelParams& p);

/// omega_k = Omega - 2J cos k
double dispersion(const ModelParams& p, double k);

/// g_k = g / sqrt(N), one entry per momentum
RVec coupling_gk(const ModelParams& p);

/// Golden-rule lifetime tau = J sin(k0) / g^2 with omega_{k0} = Delta.
/// Empty when Delta lies outside the band; throws for g = 0.
std::optional<double> decay_time_tau(const ModelParams& p);

/// Position-space Hamiltonian, split site-locally. The qubit and its cavity
/// are fused into one site of dimension 2(n_max+1); all others have n_max+1.
struct LocalTerms {
  std::vector<int> dims;        // per-site physical dimension
  std::vector<Mat> site_ops;    // one per site
  std::vector<Mat> bond_ops;    // one per bond (site, site+1), kron(left, right)
};

LocalTerms local_terms(const ModelParams& p, int n_max);

// Local operators on a cavity site (dim n_max+1) and the fused site.
Mat boson_annihilator(int n_max);
Mat boson_number(int n_max);
Mat fused_op(const Mat& qubit_op, const Mat& photon_op);  // qubit major
Mat qubit_sigma_minus();
Mat qubit_sigma_x();

/// Dense assembly of local_terms, kron over sites left to right.
/// Refuses when the total dimension exceeds max_dim.
Mat dense_hamiltonian(const ModelParams& p, int n_max, long max_dim = 20000);

/// Diagonal of the parity operator in the same product basis.
RVec dense_parity_diagonal(const ModelParams& p, int n_max);

}  // namespace vq
