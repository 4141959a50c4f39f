#include "vq/runner.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vq/polaron.hpp"

namespace vq {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write(const fs::path& path, const std::string& body) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << body;
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

void check_known_keys(const json& obj, const std::string& path,
                      std::initializer_list<const char*> known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok)
      throw std::invalid_argument("config: unknown key '" + path + it.key() +
                                  "'");
  }
}

double get_num(const json& obj, const char* key, double fallback,
               const std::string& path) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number())
    throw std::invalid_argument("config: '" + path + key + "' must be a number");
  return obj[key].get<double>();
}

int get_int(const json& obj, const char* key, int fallback,
            const std::string& path) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer())
    throw std::invalid_argument("config: '" + path + key +
                                "' must be an integer");
  return obj[key].get<int>();
}

int worker_count(size_t n_items) {
  unsigned n = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("VQ_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = static_cast<unsigned>(v);
  }
  if (n < 1) n = 1;
  return static_cast<int>(std::min<size_t>(n, n_items));
}

template <typename Fn>
void parallel_for(size_t n_items, Fn&& fn) {
  int workers = worker_count(n_items);
  if (workers <= 1) {
    for (size_t i = 0; i < n_items; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex err_mx;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (size_t i = next++; i < n_items; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(err_mx);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

json model_json(const ModelParams& m) {
  return json{{"omega", m.omega},     {"j_hop", m.j_hop},
              {"n_sites", m.n_sites}, {"delta", m.delta},
              {"g", m.g},             {"qubit_site", m.qubit()}};
}

json numerics_json(const Numerics& n) {
  return json{{"n_max", n.n_max},
              {"d_max", n.d_max},
              {"svd_tol", n.svd_tol},
              {"dt", n.dt},
              {"trotter_order", n.trotter_order},
              {"energy_tol", n.energy_tol},
              {"seed", n.seed}};
}

json schedule_json(const QuenchSchedule& s) {
  json segs = json::array();
  for (const auto& seg : s.segments)
    segs.push_back({{"t_start", seg.t_start}, {"g", seg.g}, {"delta", seg.delta}});
  return json{{"segments", segs}, {"t_end", s.t_end}, {"dt", s.dt}};
}

void write_manifest(const fs::path& dir, const RunConfig& cfg,
                    const std::vector<std::string>& outputs,
                    const std::string& status) {
  json m;
  m["version"] = kVersion;
  m["task"] = cfg.task;
  m["model"] = model_json(cfg.model);
  m["numerics"] = numerics_json(cfg.numerics);
  if (cfg.has_schedule || cfg.task == "quench")
    m["schedule"] = schedule_json(cfg.schedule);
  if (!cfg.sweep_g.empty()) m["sweep"] = {{"g_values", cfg.sweep_g}};
  m["sample_every"] = cfg.sample_every;
  m["snapshot_times"] = cfg.snapshot_times;
  m["outputs"] = outputs;
  m["status"] = status;
  atomic_write(dir / "manifest.json", m.dump(2) + "\n");
}

}  // namespace

QuenchSchedule default_coupling_schedule(const ModelParams& p, double dt) {
  QuenchSchedule s;
  double v = 2.0 * p.j_hop;
  double t_off = 24.0 / v;  // first front 24 sites out
  s.segments = {{0.0, p.g, p.delta}, {t_off, 0.0, p.delta}};
  s.t_end = 2.0 * t_off;
  s.dt = dt;
  return s;
}

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: malformed JSON: ") +
                                e.what());
  }
  if (!doc.is_object())
    throw std::invalid_argument("config: document must be a JSON object");
  check_known_keys(doc, "",
                   {"task", "model", "numerics", "sweep", "schedule", "quench",
                    "output_dir"});

  RunConfig cfg;
  if (!doc.contains("task"))
    throw std::invalid_argument("config: required key 'task' is missing");
  cfg.task = doc["task"].get<std::string>();
  if (cfg.task != "polaron-sweep" && cfg.task != "spectrum" &&
      cfg.task != "quench" && cfg.task != "oracle-check")
    throw std::invalid_argument("config: 'task' must be one of polaron-sweep, "
                                "spectrum, quench, oracle-check");

  if (doc.contains("model")) {
    const json& m = doc["model"];
    check_known_keys(m, "model.",
                     {"omega", "j_hop", "n_sites", "delta", "g", "qubit_site"});
    cfg.model.omega = get_num(m, "omega", cfg.model.omega, "model.");
    cfg.model.j_hop = get_num(m, "j_hop", cfg.model.j_hop, "model.");
    cfg.model.n_sites = get_int(m, "n_sites", cfg.model.n_sites, "model.");
    cfg.model.delta = get_num(m, "delta", cfg.model.delta, "model.");
    cfg.model.g = get_num(m, "g", cfg.model.g, "model.");
    cfg.model.qubit_site =
        get_int(m, "qubit_site", cfg.model.qubit_site, "model.");
  }
  try {
    cfg.model.validate();
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: model.") + e.what());
  }

  if (doc.contains("numerics")) {
    const json& n = doc["numerics"];
    check_known_keys(n, "numerics.",
                     {"n_max", "d_max", "svd_tol", "dt", "trotter_order",
                      "energy_tol", "seed"});
    cfg.numerics.n_max = get_int(n, "n_max", cfg.numerics.n_max, "numerics.");
    cfg.numerics.d_max = get_int(n, "d_max", cfg.numerics.d_max, "numerics.");
    cfg.numerics.svd_tol =
        get_num(n, "svd_tol", cfg.numerics.svd_tol, "numerics.");
    cfg.numerics.dt = get_num(n, "dt", cfg.numerics.dt, "numerics.");
    cfg.numerics.trotter_order =
        get_int(n, "trotter_order", cfg.numerics.trotter_order, "numerics.");
    cfg.numerics.energy_tol =
        get_num(n, "energy_tol", cfg.numerics.energy_tol, "numerics.");
    if (n.contains("seed")) cfg.numerics.seed = n["seed"].get<std::uint64_t>();
  }
  try {
    cfg.numerics.validate();
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: numerics.") + e.what());
  }

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    check_known_keys(s, "sweep.", {"g_values"});
    if (s.contains("g_values")) {
      for (const auto& v : s["g_values"]) {
        double g = v.get<double>();
        if (g < 0)
          throw std::invalid_argument("config: sweep.g_values must be >= 0");
        cfg.sweep_g.push_back(g);
      }
    }
  }
  if (cfg.sweep_g.empty())
    for (int i = 0; i <= 10; ++i) cfg.sweep_g.push_back(0.05 * i);

  if (doc.contains("schedule")) {
    const json& s = doc["schedule"];
    check_known_keys(s, "schedule.", {"segments", "t_end", "dt"});
    cfg.has_schedule = true;
    if (s.contains("segments")) {
      for (const auto& seg : s["segments"]) {
        check_known_keys(seg, "schedule.segments[].",
                         {"t_start", "g", "delta"});
        cfg.schedule.segments.push_back(
            {get_num(seg, "t_start", 0.0, "schedule.segments[]."),
             get_num(seg, "g", cfg.model.g, "schedule.segments[]."),
             get_num(seg, "delta", cfg.model.delta, "schedule.segments[].")});
      }
    }
    cfg.schedule.t_end = get_num(s, "t_end", 0.0, "schedule.");
    cfg.schedule.dt = get_num(s, "dt", cfg.numerics.dt, "schedule.");
  }

  if (doc.contains("quench")) {
    const json& q = doc["quench"];
    check_known_keys(q, "quench.", {"sample_every", "snapshot_times"});
    cfg.sample_every = get_int(q, "sample_every", cfg.sample_every, "quench.");
    if (cfg.sample_every < 1)
      throw std::invalid_argument("config: quench.sample_every must be >= 1");
    if (q.contains("snapshot_times"))
      for (const auto& v : q["snapshot_times"])
        cfg.snapshot_times.push_back(v.get<double>());
  }

  if (doc.contains("output_dir"))
    cfg.output_dir = doc["output_dir"].get<std::string>();

  if (cfg.task == "quench") {
    if (!cfg.has_schedule)
      cfg.schedule = default_coupling_schedule(cfg.model, cfg.numerics.dt);
    cfg.schedule.validate(cfg.model);
  }
  return cfg;
}

namespace {

void run_polaron_sweep(const RunConfig& cfg, const fs::path& dir,
                       std::vector<std::string>& outputs) {
  struct Row {
    double g, delta_r, p_e, e_gs, e1, e2, fidelity;
  };
  std::vector<Row> rows(cfg.sweep_g.size());
  parallel_for(cfg.sweep_g.size(), [&](size_t i) {
    ModelParams p = cfg.model;
    p.g = cfg.sweep_g[i];
    PolaronSolution sol = solve_polaron(p);
    auto [e1, e2] = bound_state_energies(sol);
    rows[i] = {p.g,      sol.delta_r,
               p.delta > 0 ? excited_probability(sol) : 0.0,
               sol.e_gs, e1,
               e2,       fidelity_to_bare(sol)};
  });
  std::ostringstream csv;
  csv << "g,delta_r,p_e,e_gs,e1,e2,fidelity\n";
  for (const auto& r : rows)
    csv << fmt17(r.g) << ',' << fmt17(r.delta_r) << ',' << fmt17(r.p_e) << ','
        << fmt17(r.e_gs) << ',' << fmt17(r.e1) << ',' << fmt17(r.e2) << ','
        << fmt17(r.fidelity) << '\n';
  atomic_write(dir / "polaron.csv", csv.str());
  outputs.push_back("polaron.csv");
}

json eigen_json(const EigenRecord& r) {
  json h = json::array();
  for (int i = 0; i < r.histogram.size(); ++i) h.push_back(r.histogram(i));
  return json{{"label", r.label},
              {"energy", r.energy},
              {"parity", r.parity},
              {"histogram", h}};
}

struct SpectrumStates {
  EigenRecord gs, e1, e2;
};

SpectrumStates compute_spectrum(const ModelParams& p, const Numerics& num) {
  SpectrumStates s;
  s.gs = find_eigenstate(p, num, +1);
  s.e1 = find_eigenstate(p, num, -1);
  s.e2 = find_eigenstate(p, num, +1, {&s.gs.state});
  return s;
}

void run_spectrum(const RunConfig& cfg, const fs::path& dir,
                  std::vector<std::string>& outputs) {
  SpectrumStates s = compute_spectrum(cfg.model, cfg.numerics);
  json out;
  out["states"] = {eigen_json(s.gs), eigen_json(s.e1), eigen_json(s.e2)};
  atomic_write(dir / "eigen.json", out.dump(2) + "\n");
  outputs.push_back("eigen.json");

  std::ostringstream csv;
  csv << "x,n_gs,n_e1,n_e2\n";
  for (int x = 0; x < cfg.model.n_sites; ++x)
    csv << x << ',' << fmt17(s.gs.n_x_profile(x)) << ','
        << fmt17(s.e1.n_x_profile(x)) << ',' << fmt17(s.e2.n_x_profile(x))
        << '\n';
  atomic_write(dir / "profiles.csv", csv.str());
  outputs.push_back("profiles.csv");

  for (const auto* r : {&s.gs, &s.e1, &s.e2}) {
    std::string name = r->label + ".mps";
    std::transform(name.begin(), name.end(), name.begin(), ::tolower);
    r->state.save(dir / name);
    outputs.push_back(name);
  }
}

void run_quench(const RunConfig& cfg, const fs::path& dir,
                std::vector<std::string>& outputs) {
  LocalTerms terms = local_terms(cfg.model, cfg.numerics.n_max);
  std::vector<int> spec(terms.dims.size(), 0);
  Mps vacuum = Mps::product_state(terms.dims, spec);

  EvolveResult res = evolve(vacuum, cfg.schedule, cfg.model, cfg.numerics,
                            cfg.sample_every, cfg.snapshot_times);

  std::ostringstream nx;
  nx << "t";
  for (int x = 0; x < cfg.model.n_sites; ++x) nx << ",x" << x;
  nx << '\n';
  for (size_t r = 0; r < res.series.times.size(); ++r) {
    nx << fmt17(res.series.times[r]);
    for (int x = 0; x < cfg.model.n_sites; ++x)
      nx << ',' << fmt17(res.series.n_x(r, x));
    nx << '\n';
  }
  atomic_write(dir / "nx.csv", nx.str());
  outputs.push_back("nx.csv");

  std::ostringstream sc;
  sc << "t,p_qb,energy,parity,norm_correction\n";
  for (size_t r = 0; r < res.series.times.size(); ++r)
    sc << fmt17(res.series.times[r]) << ',' << fmt17(res.series.p_qb[r]) << ','
       << fmt17(res.series.energy[r]) << ',' << fmt17(res.series.parity[r])
       << ',' << fmt17(res.series.norm_correction[r]) << '\n';
  atomic_write(dir / "scalars.csv", sc.str());
  outputs.push_back("scalars.csv");

  if (!res.snapshots.empty()) {
    // eigenstates of the segment Hamiltonian each snapshot evolved under
    json channels = json::array();
    for (const auto& snap : res.snapshots) {
      ModelParams p = cfg.model;
      p.g = snap.segment.g;
      p.delta = snap.segment.delta;
      SpectrumStates s = compute_spectrum(p, cfg.numerics);
      ChannelRecord ch = channel_decomposition(snap.state, s.gs, s.e1, s.e2, p,
                                               p, cfg.numerics.n_max);
      json rec;
      rec["t"] = snap.time;
      rec["c00"] = {ch.c00.real(), ch.c00.imag()};
      rec["c02"] = {ch.c02.real(), ch.c02.imag()};
      rec["p00"] = std::norm(ch.c00);
      rec["p02"] = std::norm(ch.c02);
      rec["one_photon_weight"] = ch.one_photon_weight;
      rec["two_photon_weight"] = ch.two_photon_weight;
      rec["deficit"] = ch.deficit;
      rec["nx1"] = std::vector<double>(ch.nx1.data(), ch.nx1.data() + ch.nx1.size());
      rec["nx2"] = std::vector<double>(ch.nx2.data(), ch.nx2.data() + ch.nx2.size());
      channels.push_back(rec);
    }
    atomic_write(dir / "channels.json", channels.dump(2) + "\n");
    outputs.push_back("channels.json");
  }
}

void run_oracle_check(const RunConfig& cfg, const fs::path& dir,
                      std::vector<std::string>& outputs) {
  ModelParams p = cfg.model;
  const int n_max = cfg.numerics.n_max;

  Mat h = dense_hamiltonian(p, n_max);
  RVec par = dense_parity_diagonal(p, n_max);
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  double ed_gs = es.eigenvalues()(0);

  // odd-parity block minimum
  std::vector<long> odd_idx;
  for (long i = 0; i < par.size(); ++i)
    if (par(i) < 0) odd_idx.push_back(i);
  Mat h_odd(odd_idx.size(), odd_idx.size());
  for (size_t a = 0; a < odd_idx.size(); ++a)
    for (size_t b = 0; b < odd_idx.size(); ++b)
      h_odd(a, b) = h(odd_idx[a], odd_idx[b]);
  Eigen::SelfAdjointEigenSolver<Mat> es_odd(h_odd, Eigen::EigenvaluesOnly);
  double ed_e1 = es_odd.eigenvalues()(0);

  Numerics num = cfg.numerics;
  num.energy_tol = std::min(num.energy_tol, 1e-9);
  EigenSearchOptions opts;
  opts.dt_min = 2e-4;
  EigenRecord mps_gs = find_eigenstate(p, num, +1, {}, opts);
  EigenRecord mps_e1 = find_eigenstate(p, num, -1, {}, opts);

  PolaronSolution sol = solve_polaron(p, ModeBasis::open_chain(p));
  auto [pol_e1, pol_e2] = bound_state_energies(sol);

  json rep;
  rep["ed"] = {{"e_gs", ed_gs}, {"e1", ed_e1}};
  rep["mps"] = {{"e_gs", mps_gs.energy}, {"e1", mps_e1.energy}};
  rep["polaron"] = {{"e_gs", sol.e_gs},
                    {"delta_r", sol.delta_r},
                    {"e1", pol_e1},
                    {"e2", pol_e2}};
  rep["deltas"] = {{"mps_gs_vs_ed", mps_gs.energy - ed_gs},
                   {"mps_e1_vs_ed", mps_e1.energy - ed_e1},
                   {"polaron_gap", sol.e_gs - ed_gs}};
  atomic_write(dir / "oracle.json", rep.dump(2) + "\n");
  outputs.push_back("oracle.json");
}

}  // namespace

void run(const RunConfig& config, const std::string& out_dir) {
  std::string target = out_dir.empty() ? config.output_dir : out_dir;
  if (target.empty())
    throw std::invalid_argument("run: no output directory given");
  fs::path dir(target);
  fs::create_directories(dir);

  std::vector<std::string> outputs;
  write_manifest(dir, config, outputs, "incomplete");
  try {
    if (config.task == "polaron-sweep")
      run_polaron_sweep(config, dir, outputs);
    else if (config.task == "spectrum")
      run_spectrum(config, dir, outputs);
    else if (config.task == "quench")
      run_quench(config, dir, outputs);
    else if (config.task == "oracle-check")
      run_oracle_check(config, dir, outputs);
    else
      throw std::invalid_argument("run: unknown task " + config.task);
  } catch (...) {
    write_manifest(dir, config, outputs, "incomplete");
    throw;
  }
  write_manifest(dir, config, outputs, "complete");
}

}  // namespace vq
