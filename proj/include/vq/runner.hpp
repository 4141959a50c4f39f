#pragma once

#include <string>
#include <vector>

#include "vq/quench.hpp"

namespace vq {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
  std::string task;  // polaron-sweep | spectrum | quench | oracle-check
  ModelParams model;
  Numerics numerics;
  std::vector<double> sweep_g;         // polaron-sweep grid
  bool has_schedule = false;
  QuenchSchedule schedule;             // quench task; defaulted when absent
  int sample_every = 10;
  std::vector<double> snapshot_times;  // channel-decomposition snapshots
  std::string output_dir;              // may be overridden by run()
};

/// Parses and validates a JSON config document. Unknown keys and
/// out-of-range values are rejected with a path-qualified message.
RunConfig parse_config(const std::string& json_text);

/// Executes the configured task, writing CSV/JSON artifacts and a manifest
/// into out_dir (falls back to config.output_dir). Throws on failure;
/// a partial manifest marked "incomplete" is left behind in that case.
void run(const RunConfig& config, const std::string& out_dir);

/// Default coupling-quench schedule: g on at t=0, off when the first
/// wavepacket front has cleared the emitter by >= 24 sites.
QuenchSchedule default_coupling_schedule(const ModelParams& p, double dt);

}  // namespace vq
