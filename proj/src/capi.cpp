#include "vq.h"

#include <cstring>
#include <string>

#include "vq/polaron.hpp"
#include "vq/runner.hpp"

namespace {

thread_local std::string g_last_error;

vq_status fail(vq_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
vq_status guard(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(VQ_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(VQ_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::domain_error& e) {
    return fail(VQ_ERR_UNDEFINED, e.what());
  } catch (const std::length_error& e) {
    return fail(VQ_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(VQ_ERR_RUNTIME, e.what());
  }
}

}  // namespace

struct vq_model {
  vq::ModelParams params;
};

struct vq_polaron {
  vq::PolaronSolution sol;
};

struct vq_config {
  vq::RunConfig cfg;
};

extern "C" {

const char* vq_version(void) { return vq::kVersion; }

const char* vq_status_name(vq_status s) {
  switch (s) {
    case VQ_OK: return "ok";
    case VQ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case VQ_ERR_PARSE: return "parse error";
    case VQ_ERR_NO_CONVERGENCE: return "no convergence";
    case VQ_ERR_UNDEFINED: return "undefined";
    case VQ_ERR_IO: return "io error";
    case VQ_ERR_RUNTIME: return "runtime error";
  }
  return "unknown";
}

const char* vq_last_error(void) { return g_last_error.c_str(); }

vq_status vq_model_create(double omega, double j_hop, int n_sites,
                          double delta, double g, int qubit_site,
                          vq_model** out) {
  if (out == nullptr) return fail(VQ_ERR_INVALID_ARGUMENT, "out is NULL");
  return guard([&] {
    vq::ModelParams p{omega, j_hop, n_sites, delta, g, qubit_site};
    p.validate();
    *out = new vq_model{p};
    return VQ_OK;
  });
}

void vq_model_free(vq_model* m) { delete m; }

vq_status vq_model_dispersion(const vq_model* m, double k, double* out) {
  if (m == nullptr || out == nullptr)
    return fail(VQ_ERR_INVALID_ARGUMENT, "NULL argument");
  *out = vq::dispersion(m->params, k);
  return VQ_OK;
}

vq_status vq_model_band(const vq_model* m, double* gap_bottom,
                        double* band_top, double* v_max) {
  if (m == nullptr) return fail(VQ_ERR_INVALID_ARGUMENT, "NULL model");
  return guard([&] {
    vq::BandInfo b = vq::band_info(m->params);
    if (gap_bottom) *gap_bottom = b.gap_bottom;
    if (band_top) *band_top = b.band_top;
    if (v_max) *v_max = b.v_max;
    return VQ_OK;
  });
}

vq_status vq_model_decay_time(const vq_model* m, double* tau) {
  if (m == nullptr || tau == nullptr)
    return fail(VQ_ERR_INVALID_ARGUMENT, "NULL argument");
  return guard([&] {
    auto t = vq::decay_time_tau(m->params);
    if (!t)
      return fail(VQ_ERR_UNDEFINED,
                  "decay time undefined: delta outside the band");
    *tau = *t;
    return VQ_OK;
  });
}

vq_status vq_polaron_solve(const vq_model* m, double tol, int max_iter,
                           vq_polaron** out) {
  if (m == nullptr || out == nullptr)
    return fail(VQ_ERR_INVALID_ARGUMENT, "NULL argument");
  if (tol <= 0) tol = 1e-12;
  if (max_iter <= 0) max_iter = 10000;
  return guard([&] {
    try {
      *out = new vq_polaron{vq::solve_polaron(m->params, tol, max_iter)};
    } catch (const std::runtime_error& e) {
      return fail(VQ_ERR_NO_CONVERGENCE, e.what());
    }
    return VQ_OK;
  });
}

void vq_polaron_free(vq_polaron* p) { delete p; }

#define VQ_POLARON_GETTER(name, expr)                              \
  vq_status name(const vq_polaron* p, double* out) {               \
    if (p == nullptr || out == nullptr)                            \
      return fail(VQ_ERR_INVALID_ARGUMENT, "NULL argument");       \
    return guard([&] {                                             \
      *out = (expr);                                               \
      return VQ_OK;                                                \
    });                                                            \
  }

VQ_POLARON_GETTER(vq_polaron_delta_r, p->sol.delta_r)
VQ_POLARON_GETTER(vq_polaron_ground_energy, p->sol.e_gs)
VQ_POLARON_GETTER(vq_polaron_excited_probability,
                  vq::excited_probability(p->sol))
VQ_POLARON_GETTER(vq_polaron_fidelity, vq::fidelity_to_bare(p->sol))

#undef VQ_POLARON_GETTER

vq_status vq_polaron_iterations(const vq_polaron* p, int* out) {
  if (p == nullptr || out == nullptr)
    return fail(VQ_ERR_INVALID_ARGUMENT, "NULL argument");
  *out = p->sol.iterations;
  return VQ_OK;
}

vq_status vq_polaron_fk(const vq_polaron* p, double* out, size_t len) {
  if (p == nullptr || out == nullptr)
    return fail(VQ_ERR_INVALID_ARGUMENT, "NULL argument");
  if (len != static_cast<size_t>(p->sol.f_k.size()))
    return fail(VQ_ERR_INVALID_ARGUMENT, "vq_polaron_fk: wrong length");
  std::memcpy(out, p->sol.f_k.data(), len * sizeof(double));
  return VQ_OK;
}

vq_status vq_polaron_fx(const vq_polaron* p, double* out_re, double* out_im,
                        size_t len) {
  if (p == nullptr || out_re == nullptr || out_im == nullptr)
    return fail(VQ_ERR_INVALID_ARGUMENT, "NULL argument");
  return guard([&] {
    vq::Vec fx = vq::polaron_fx(p->sol);
    if (len != static_cast<size_t>(fx.size()))
      return fail(VQ_ERR_INVALID_ARGUMENT, "vq_polaron_fx: wrong length");
    for (size_t i = 0; i < len; ++i) {
      out_re[i] = fx(i).real();
      out_im[i] = fx(i).imag();
    }
    return VQ_OK;
  });
}

vq_status vq_polaron_bound_states(const vq_polaron* p, double* e1,
                                  double* e2) {
  if (p == nullptr || e1 == nullptr || e2 == nullptr)
    return fail(VQ_ERR_INVALID_ARGUMENT, "NULL argument");
  return guard([&] {
    auto [a, b] = vq::bound_state_energies(p->sol);
    *e1 = a;
    *e2 = b;
    return VQ_OK;
  });
}

vq_status vq_config_parse(const char* json_text, vq_config** out) {
  if (json_text == nullptr || out == nullptr)
    return fail(VQ_ERR_INVALID_ARGUMENT, "NULL argument");
  try {
    *out = new vq_config{vq::parse_config(json_text)};
    return VQ_OK;
  } catch (const std::exception& e) {
    return fail(VQ_ERR_PARSE, e.what());
  }
}

void vq_config_free(vq_config* c) { delete c; }

vq_status vq_run(const vq_config* c, const char* out_dir) {
  if (c == nullptr) return fail(VQ_ERR_INVALID_ARGUMENT, "NULL config");
  return guard([&] {
    try {
      vq::run(c->cfg, out_dir ? out_dir : "");
    } catch (const std::ios_base::failure& e) {
      return fail(VQ_ERR_IO, e.what());
    }
    return VQ_OK;
  });
}

}  // extern "C"
