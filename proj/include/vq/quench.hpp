#pragma once

#include <vector>

#include "vq/spectrum.hpp"

namespace vq {

struct QuenchSegment {
  double t_start;
  double g;
  double delta;
};

struct QuenchSchedule {
  std::vector<QuenchSegment> segments;
  double t_end = 0.0;
  double dt = 0.05;

  void validate(const ModelParams& p) const;
  /// Segment active at time t.
  const QuenchSegment& at(double t) const;
};

struct TimeSeries {
  std::vector<double> times;
  RMat n_x;  // row per sample, column per site
  std::vector<double> p_qb;
  std::vector<double> energy;
  std::vector<double> parity;
  std::vector<double> norm_correction;  // per-step correction at sample time
  double max_step_norm_correction = 0.0;
  double max_step_discarded = 0.0;
};

struct Snapshot {
  double time;
  QuenchSegment segment;
  Mps state;
};

struct EvolveResult {
  TimeSeries series;
  std::vector<Snapshot> snapshots;
  Mps final_state;
};

/// Trotterized real-time evolution through the schedule; gates rebuilt at
/// segment boundaries; observables sampled every `sample_every` steps.
EvolveResult evolve(const Mps& initial, const QuenchSchedule& schedule,
                    const ModelParams& params, const Numerics& num,
                    int sample_every = 10,
                    const std::vector<double>& snapshot_times = {});

struct ChannelRecord {
  cxd c00;       // <GS|Psi>
  cxd c02;       // <E2|Psi>
  RVec nx1;      // one-photon wavepacket density
  RVec nx2;      // two-photon wavepacket density
  double one_photon_weight;  // sum nx1
  double two_photon_weight;  // 0.5 sum nx2
  double deficit;            // 1 - captured weight
};

/// Channel decomposition of a time-evolved state against the eigenstates
/// of the segment Hamiltonian it evolved under.
ChannelRecord channel_decomposition(const Mps& psi, const EigenRecord& gs,
                                    const EigenRecord& e1,
                                    const EigenRecord& e2,
                                    const ModelParams& eigen_params,
                                    const ModelParams& state_params,
                                    int n_max);

struct QubitDiagnostics {
  double peak_frequency;      // dominant spectral line of P_qb on (tau, t_off)
  double frequency_resolution;
  double post_off_variance;   // Var[P_qb] for t > t_off
};

QubitDiagnostics qubit_series_checks(const TimeSeries& series, double t_off,
                                     double tau);

}  // namespace vq
