/* C API of the vacuum-quench simulator: ground/bound-state polaron theory,
 * MPS spectra and quench dynamics behind opaque handles and error codes.
 * All functions return VQ_OK on success; vq_last_error() describes the most
 * recent failure on the calling thread. */
#ifndef VQ_H
#define VQ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vq_status {
  VQ_OK = 0,
  VQ_ERR_INVALID_ARGUMENT = 1,
  VQ_ERR_PARSE = 2,
  VQ_ERR_NO_CONVERGENCE = 3,
  VQ_ERR_UNDEFINED = 4, /* quantity undefined for these parameters */
  VQ_ERR_IO = 5,
  VQ_ERR_RUNTIME = 6
} vq_status;

typedef struct vq_model vq_model;
typedef struct vq_polaron vq_polaron;
typedef struct vq_config vq_config;

const char* vq_version(void);
const char* vq_status_name(vq_status s);
/* Message of the last error on this thread; empty string if none. */
const char* vq_last_error(void);

/* ---- model ---- */
vq_status vq_model_create(double omega, double j_hop, int n_sites,
                          double delta, double g, int qubit_site,
                          vq_model** out);
void vq_model_free(vq_model* m);
vq_status vq_model_dispersion(const vq_model* m, double k, double* out);
vq_status vq_model_band(const vq_model* m, double* gap_bottom,
                        double* band_top, double* v_max);
/* VQ_ERR_UNDEFINED when delta lies outside the band (out untouched). */
vq_status vq_model_decay_time(const vq_model* m, double* tau);

/* ---- polaron ---- */
vq_status vq_polaron_solve(const vq_model* m, double tol, int max_iter,
                           vq_polaron** out);
void vq_polaron_free(vq_polaron* p);
vq_status vq_polaron_delta_r(const vq_polaron* p, double* out);
vq_status vq_polaron_ground_energy(const vq_polaron* p, double* out);
vq_status vq_polaron_excited_probability(const vq_polaron* p, double* out);
vq_status vq_polaron_fidelity(const vq_polaron* p, double* out);
vq_status vq_polaron_iterations(const vq_polaron* p, int* out);
/* f_k amplitudes; len must equal n_sites. */
vq_status vq_polaron_fk(const vq_polaron* p, double* out, size_t len);
/* Real-space profile f_x (complex), len must equal n_sites. */
vq_status vq_polaron_fx(const vq_polaron* p, double* out_re, double* out_im,
                        size_t len);
/* Lowest one- and two-excitation eigenvalues of the polaron Hamiltonian. */
vq_status vq_polaron_bound_states(const vq_polaron* p, double* e1, double* e2);

/* ---- runs ---- */
vq_status vq_config_parse(const char* json_text, vq_config** out);
void vq_config_free(vq_config* c);
/* Executes the configured task, writing artifacts into out_dir. */
vq_status vq_run(const vq_config* c, const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* VQ_H */
