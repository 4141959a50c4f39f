#include "vq/quench.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vq {

void QuenchSchedule::validate(const ModelParams& p) const {
  if (segments.empty())
    throw std::invalid_argument("schedule: at least one segment required");
  if (segments.front().t_start != 0.0)
    throw std::invalid_argument("schedule: first segment must start at t=0");
  for (size_t i = 1; i < segments.size(); ++i)
    if (segments[i].t_start <= segments[i - 1].t_start)
      throw std::invalid_argument("schedule: segments must be ordered");
  if (t_end <= segments.back().t_start)
    throw std::invalid_argument("schedule: t_end before last segment");
  if (dt <= 0) throw std::invalid_argument("schedule: dt must be > 0");
  double cap = std::min(0.1 / p.j_hop, 0.1 / p.omega);
  if (dt > cap + 1e-15)
    throw std::invalid_argument("schedule: dt exceeds 0.1/max(J, Omega)");
  for (const auto& s : segments) {
    if (s.g < 0) throw std::invalid_argument("schedule: g must be >= 0");
    if (s.delta < 0) throw std::invalid_argument("schedule: delta must be >= 0");
  }
}

const QuenchSegment& QuenchSchedule::at(double t) const {
  const QuenchSegment* cur = &segments.front();
  for (const auto& s : segments)
    if (s.t_start <= t + 1e-12) cur = &s;
  return *cur;
}

EvolveResult evolve(const Mps& initial, const QuenchSchedule& schedule,
                    const ModelParams& params, const Numerics& num,
                    int sample_every, const std::vector<double>& snapshot_times) {
  params.validate();
  num.validate();
  schedule.validate(params);
  if (sample_every < 1)
    throw std::invalid_argument("evolve: sample_every must be >= 1");

  EvolveResult out;
  Mps state = initial;
  state.normalize();

  std::vector<double> snaps = snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  size_t next_snap = 0;

  const double dt = schedule.dt;
  const long n_steps = std::lround(schedule.t_end / dt);
  const int n = params.n_sites;

  std::vector<RVec> nx_rows;
  ProductOperator parity;
  LocalTerms terms;
  std::unique_ptr<TrotterStepper> stepper;
  std::unique_ptr<EnergyEvaluator> eval;
  const QuenchSegment* segment = nullptr;

  double last_correction = 0.0;
  auto sample = [&](double t) {
    out.series.times.push_back(t);
    nx_rows.push_back(spatial_profile(state, params, num.n_max));
    out.series.p_qb.push_back(qubit_population(state, params, num.n_max));
    out.series.energy.push_back((*eval)(state));
    out.series.parity.push_back(
        state.expect_product_operator(parity).real());
    out.series.norm_correction.push_back(last_correction);
  };

  for (long k = 0; k <= n_steps; ++k) {
    double t = k * dt;
    const QuenchSegment& seg = schedule.at(t);
    if (segment == nullptr || seg.g != segment->g ||
        seg.delta != segment->delta) {
      segment = &seg;
      ModelParams p = params;
      p.g = seg.g;
      p.delta = seg.delta;
      terms = local_terms(p, num.n_max);
      parity = parity_operator(p, num.n_max);
      stepper = std::make_unique<TrotterStepper>(
          terms, cxd(0.0, -dt), num.trotter_order, num.d_max, num.svd_tol);
      eval = std::make_unique<EnergyEvaluator>(terms);
    }
    while (next_snap < snaps.size() && snaps[next_snap] <= t + dt * 0.5) {
      out.snapshots.push_back({t, seg, state});
      ++next_snap;
    }
    if (k % sample_every == 0) sample(t);
    if (k == n_steps) break;
    StepResult sr = stepper->step(state);
    last_correction = sr.norm_correction;
    out.series.max_step_norm_correction =
        std::max(out.series.max_step_norm_correction, sr.norm_correction);
    out.series.max_step_discarded =
        std::max(out.series.max_step_discarded, sr.discarded);
  }

  out.series.n_x.resize(nx_rows.size(), n);
  for (size_t r = 0; r < nx_rows.size(); ++r)
    out.series.n_x.row(r) = nx_rows[r].transpose();
  out.final_state = std::move(state);
  return out;
}

namespace {

Mat creation_op(const ModelParams& p, int n_max, int site) {
  Mat adag = boson_annihilator(n_max).adjoint();
  return (site == p.qubit()) ? fused_op(Mat::Identity(2, 2), adag) : adag;
}

}  // namespace

ChannelRecord channel_decomposition(const Mps& psi, const EigenRecord& gs,
                                    const EigenRecord& e1,
                                    const EigenRecord& e2,
                                    const ModelParams& eigen_params,
                                    const ModelParams& state_params,
                                    int n_max) {
  if (eigen_params.g != state_params.g ||
      eigen_params.delta != state_params.delta ||
      eigen_params.n_sites != state_params.n_sites)
    throw std::invalid_argument(
        "channel_decomposition: eigenstates were computed for different "
        "(g, delta) than the evolving segment");
  const int n = state_params.n_sites;

  ChannelRecord rec;
  rec.c00 = Mps::overlap(gs.state, psi);
  rec.c02 = Mps::overlap(e2.state, psi);

  // <bra| a_x^+ |E1> for every site
  auto one_photon_amps = [&](const Mps& bra) {
    Vec a = Vec::Zero(n);
    for (int x = 0; x < n; ++x) {
      std::pair<int, Mat> ins{x, creation_op(state_params, n_max, x)};
      a(x) = Mps::overlap_with_insertion(bra, e1.state, std::span(&ins, 1));
    }
    return a;
  };

  // amplitude matrix <bra| a_x^+ a_x'^+ |GS>, cached-environment sweep
  auto two_photon_amps = [&](const Mps& bra) {
    const Mps& ket = gs.state;
    std::vector<Mat> right(n + 1);
    right[n] = Mat::Ones(1, 1);
    for (int i = n - 1; i >= 0; --i)
      right[i] = Mps::transfer_right(right[i + 1], bra, ket, i);
    Mat amp = Mat::Zero(n, n);
    Mat left = Mat::Ones(1, 1);
    for (int x = 0; x < n; ++x) {
      Mat adag = creation_op(state_params, n_max, x);
      Mat adag2 = adag * adag;
      Mat with_two = Mps::transfer_left(left, bra, ket, x, &adag2);
      amp(x, x) = (with_two * right[x + 1]).trace();
      Mat m = Mps::transfer_left(left, bra, ket, x, &adag);
      for (int xp = x + 1; xp < n; ++xp) {
        Mat op = creation_op(state_params, n_max, xp);
        Mat closed = Mps::transfer_left(m, bra, ket, xp, &op);
        cxd a = (closed * right[xp + 1]).trace();
        amp(x, xp) = amp(xp, x) = a;
        m = Mps::transfer_left(m, bra, ket, xp);
      }
      left = Mps::transfer_left(left, bra, ket, x);
    }
    return amp;
  };

  // Subtract the components the channel states share with the discrete
  // eigenstates, so the weights count emitted photons only: the dressed
  // ground state itself carries static one- and two-photon clouds that
  // would otherwise leak into the wavepacket channels.
  Vec a1 = one_photon_amps(psi) - std::conj(rec.c00) * one_photon_amps(gs.state) -
           std::conj(rec.c02) * one_photon_amps(e2.state);
  Mat a2 = two_photon_amps(psi) - std::conj(rec.c00) * two_photon_amps(gs.state) -
           std::conj(rec.c02) * two_photon_amps(e2.state);

  // One-photon wavepackets also leak into the pair amplitudes through the
  // bound-state cloud, <E1| a_y a+_x a+_x' |GS> ~ d_yx s(x') + d_yx' s(x)
  // with s(x) = <E1| a+_x |GS>; remove that component as well.
  Vec s(n);
  for (int x = 0; x < n; ++x) {
    std::pair<int, Mat> ins{x, creation_op(state_params, n_max, x)};
    s(x) = Mps::overlap_with_insertion(e1.state, gs.state, std::span(&ins, 1));
  }
  a2 -= a1 * s.transpose() + s * a1.transpose();

  // For a two-photon wavepacket sum_{x<x'} phi a+_x a+_x'|GS>, the
  // amplitude matrix reproduces phi on both orderings, so the photon
  // density at x is the plain row sum and the channel weight carries 1/2.
  rec.nx1 = a1.cwiseAbs2();
  rec.nx2 = a2.cwiseAbs2().rowwise().sum();

  rec.one_photon_weight = rec.nx1.sum();
  rec.two_photon_weight = 0.5 * rec.nx2.sum();
  rec.deficit = 1.0 - (std::norm(rec.c00) + std::norm(rec.c02) +
                       rec.one_photon_weight + rec.two_photon_weight);
  return rec;
}

QubitDiagnostics qubit_series_checks(const TimeSeries& series, double t_off,
                                     double tau) {
  std::vector<double> window_t, window_v;
  std::vector<double> post;
  for (size_t i = 0; i < series.times.size(); ++i) {
    double t = series.times[i];
    if (t > tau && t < t_off) {
      window_t.push_back(t);
      window_v.push_back(series.p_qb[i]);
    } else if (t > t_off) {
      post.push_back(series.p_qb[i]);
    }
  }
  if (window_t.size() < 16)
    throw std::runtime_error(
        "qubit_series_checks: window (tau, t_off) has fewer than 16 samples; "
        "evolve longer or sample more often");

  double mean = 0.0;
  for (double v : window_v) mean += v;
  mean /= window_v.size();

  const double t0 = window_t.front();
  const double span = window_t.back() - t0;
  const double dt_s = window_t[1] - window_t[0];
  const double f_nyquist = std::numbers::pi / dt_s;
  const double df = 2.0 * std::numbers::pi / span / 16.0;  // zero-padded grid

  QubitDiagnostics diag;
  diag.frequency_resolution = 2.0 * std::numbers::pi / span;
  diag.peak_frequency = 0.0;
  double best = -1.0;
  for (double w = diag.frequency_resolution * 0.5; w < f_nyquist; w += df) {
    cxd acc = 0.0;
    for (size_t i = 0; i < window_t.size(); ++i)
      acc += (window_v[i] - mean) * std::exp(cxd(0.0, -w * (window_t[i] - t0)));
    double power = std::norm(acc);
    if (power > best) {
      best = power;
      diag.peak_frequency = w;
    }
  }

  if (post.empty()) {
    diag.post_off_variance = 0.0;
  } else {
    double m = 0.0, v = 0.0;
    for (double x : post) m += x;
    m /= post.size();
    for (double x : post) v += (x - m) * (x - m);
    diag.post_off_variance = v / post.size();
  }
  return diag;
}

}  // namespace vq
