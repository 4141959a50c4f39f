// Command-line front end. Talks to the core only through the C API in vq.h.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vq.h"

using nlohmann::json;

namespace {

json load_or_default(const std::string& config_path, const std::string& task) {
  json doc;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + config_path);
    in >> doc;
    if (!doc.is_object())
      throw CLI::ValidationError("--config", "top level must be an object");
  }
  doc["task"] = task;
  return doc;
}

// "numerics.d_max=24" -> doc["numerics"]["d_max"] = 24. Values are parsed as
// JSON when possible, otherwise taken as strings.
void apply_override(json& doc, const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw CLI::ValidationError("--override", "expected key=value, got " + spec);
  std::string key = spec.substr(0, eq);
  std::string value = spec.substr(eq + 1);
  std::string pointer = "/";
  for (char c : key) pointer += (c == '.') ? '/' : c;
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;
  doc[json::json_pointer(pointer)] = parsed;
}

int run_task(const std::string& task, const std::string& config_path,
             const std::string& out_dir, long long seed,
             const std::vector<std::string>& overrides) {
  json doc = load_or_default(config_path, task);
  if (seed >= 0) doc["numerics"]["seed"] = seed;
  for (const auto& ov : overrides) apply_override(doc, ov);
  if (!out_dir.empty()) doc["output_dir"] = out_dir;

  vq_config* cfg = nullptr;
  vq_status st = vq_config_parse(doc.dump().c_str(), &cfg);
  if (st != VQ_OK) {
    std::cerr << "error (" << vq_status_name(st) << "): " << vq_last_error()
              << "\n";
    return 1;
  }
  st = vq_run(cfg, out_dir.empty() ? nullptr : out_dir.c_str());
  vq_config_free(cfg);
  if (st != VQ_OK) {
    std::cerr << "error (" << vq_status_name(st) << "): " << vq_last_error()
              << "\n";
    return 1;
  }
  return 0;
}

int run_report(const std::string& dir) {
  std::ifstream in(dir + "/manifest.json");
  if (!in) {
    std::cerr << "error: no manifest.json in " << dir << "\n";
    return 1;
  }
  json m;
  in >> m;
  std::cout << "run: " << m.value("task", std::string("?"))
            << "  status: " << m.value("status", std::string("?"))
            << "  version: " << m.value("version", std::string("?")) << "\n";
  if (m.contains("outputs"))
    for (const auto& f : m["outputs"])
      std::cout << "  " << f.get<std::string>() << "\n";
  if (m.contains("model")) std::cout << "model: " << m["model"].dump() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vacuum-quench single-photon emitter simulator"};
  app.set_version_flag("--version", std::string(vq_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  long long seed = -1;
  std::vector<std::string> overrides;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "RNG seed (overrides config)");
    sub->add_option("--override", overrides,
                    "config override, key=value (repeatable)");
  };

  struct TaskCmd {
    const char* name;
    const char* task;
    const char* help;
  };
  const TaskCmd cmds[] = {
      {"polaron", "polaron-sweep",
       "variational ground-state sweep over coupling strength"},
      {"spectrum", "spectrum", "find ground and bound eigenstates"},
      {"quench", "quench", "real-time evolution through a coupling quench"},
      {"oracle", "oracle-check",
       "cross-check variational and tensor-network results against exact "
       "diagonalization at small size"},
  };
  for (const auto& c : cmds) add_common(app.add_subcommand(c.name, c.help));

  std::string report_dir = "out";
  auto* report = app.add_subcommand("report", "summarize a finished run");
  report->add_option("dir", report_dir, "run directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (report->parsed()) return run_report(report_dir);
    for (const auto& c : cmds)
      if (app.get_subcommand(c.name)->parsed())
        return run_task(c.task, config_path, out_dir, seed, overrides);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
