#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "vq.h"

namespace fs = std::filesystem;

TEST_CASE("version and status names") {
  CHECK(std::string(vq_version()) == "0.1.0");
  CHECK(std::string(vq_status_name(VQ_OK)) == "ok");
  CHECK(std::strlen(vq_status_name(VQ_ERR_PARSE)) > 0);
}

TEST_CASE("model handle lifecycle and queries") {
  vq_model* m = nullptr;
  REQUIRE(vq_model_create(1.0, 0.4, 32, 0.3, 0.5, -1, &m) == VQ_OK);
  double w = 0.0;
  CHECK(vq_model_dispersion(m, 0.0, &w) == VQ_OK);
  CHECK(w == doctest::Approx(0.2));
  double lo, hi, v;
  CHECK(vq_model_band(m, &lo, &hi, &v) == VQ_OK);
  CHECK(lo == doctest::Approx(0.2));
  CHECK(hi == doctest::Approx(1.8));
  CHECK(v == doctest::Approx(0.8));
  double tau = 0.0;
  CHECK(vq_model_decay_time(m, &tau) == VQ_OK);
  CHECK(tau == doctest::Approx(0.7746).epsilon(1e-4));
  vq_model_free(m);

  vq_model* bad = nullptr;
  CHECK(vq_model_create(1.0, 0.4, 32, 0.3, -0.5, -1, &bad) ==
        VQ_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::strlen(vq_last_error()) > 0);
}

TEST_CASE("decay time outside the band reports undefined") {
  vq_model* m = nullptr;
  REQUIRE(vq_model_create(1.8, 0.4, 32, 0.3, 0.5, -1, &m) == VQ_OK);
  double tau = 0.0;
  CHECK(vq_model_decay_time(m, &tau) == VQ_ERR_UNDEFINED);
  vq_model_free(m);
}

TEST_CASE("polaron solve and accessors") {
  vq_model* m = nullptr;
  REQUIRE(vq_model_create(1.0, 0.4, 64, 0.3, 0.3, -1, &m) == VQ_OK);
  vq_polaron* p = nullptr;
  REQUIRE(vq_polaron_solve(m, 0.0, 0, &p) == VQ_OK);

  double dr = 0, egs = 0, pe = 0, f = 0;
  CHECK(vq_polaron_delta_r(p, &dr) == VQ_OK);
  CHECK(dr > 0.0);
  CHECK(dr < 0.3);
  CHECK(vq_polaron_ground_energy(p, &egs) == VQ_OK);
  CHECK(egs < 0.0);
  CHECK(vq_polaron_excited_probability(p, &pe) == VQ_OK);
  CHECK(pe == doctest::Approx((1.0 - dr / 0.3) / 2).epsilon(1e-12));
  CHECK(vq_polaron_fidelity(p, &f) == VQ_OK);
  CHECK(f > 0.0);
  CHECK(f < 1.0);
  int iters = 0;
  CHECK(vq_polaron_iterations(p, &iters) == VQ_OK);
  CHECK(iters > 0);

  std::vector<double> fk(64);
  CHECK(vq_polaron_fk(p, fk.data(), fk.size()) == VQ_OK);
  double sum = 0.0;
  for (double v : fk) sum += v * v;
  CHECK(f == doctest::Approx(std::exp(-sum)).epsilon(1e-12));
  CHECK(vq_polaron_fk(p, fk.data(), 10) == VQ_ERR_INVALID_ARGUMENT);

  std::vector<double> re(64), im(64);
  CHECK(vq_polaron_fx(p, re.data(), im.data(), 64) == VQ_OK);
  double parseval = 0.0;
  for (int i = 0; i < 64; ++i) parseval += re[i] * re[i] + im[i] * im[i];
  CHECK(parseval == doctest::Approx(sum).epsilon(1e-10));

  double e1 = 0, e2 = 0;
  CHECK(vq_polaron_bound_states(p, &e1, &e2) == VQ_OK);
  CHECK(e1 < 0.2 + egs + 1e-3);  // below the one-photon band edge
  CHECK(e2 > e1);

  vq_polaron_free(p);
  vq_model_free(m);
}

TEST_CASE("config parse and run through the C surface") {
  vq_config* cfg = nullptr;
  CHECK(vq_config_parse("{\"task\":\"nope\"}", &cfg) == VQ_ERR_PARSE);
  CHECK(std::strlen(vq_last_error()) > 0);

  const char* doc =
      "{\"task\":\"polaron-sweep\",\"model\":{\"n_sites\":16},"
      "\"sweep\":{\"g_values\":[0.0,0.2]}}";
  REQUIRE(vq_config_parse(doc, &cfg) == VQ_OK);
  fs::path out = fs::temp_directory_path() / "vq_capi_run";
  fs::remove_all(out);
  CHECK(vq_run(cfg, out.string().c_str()) == VQ_OK);
  CHECK(fs::exists(out / "polaron.csv"));
  CHECK(fs::exists(out / "manifest.json"));
  fs::remove_all(out);
  vq_config_free(cfg);

  CHECK(vq_run(nullptr, "x") == VQ_ERR_INVALID_ARGUMENT);
}
