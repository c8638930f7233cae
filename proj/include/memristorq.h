#ifndef MEMRISTORQ_H
#define MEMRISTORQ_H

/* C interface to the memristive-gate simulation library.
 *
 * Conventions:
 *  - Every function returns an mq_status; MQ_OK means success.
 *  - On failure, mq_last_error() describes the problem (thread local).
 *  - Tabular results come back as an opaque mq_table owned by the caller
 *    (free with mq_table_free). Structured results come back as malloc'd
 *    JSON strings (free with mq_string_free).
 *  - Angles are radians. Channel mode is 0 = plasticity, 1 = encoding.
 *  - The drive amplitude eta is selected by eta_imag: 0 -> 1, 1 -> i.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined _WIN32
#define MQ_API __declspec(dllexport)
#else
#define MQ_API __attribute__((visibility("default")))
#endif

typedef enum mq_status {
    MQ_OK = 0,
    MQ_ERR_NULL_ARGUMENT = 1,
    MQ_ERR_INVALID_ARGUMENT = 2,
    MQ_ERR_RUNTIME = 3
} mq_status;

typedef struct mq_table mq_table;

MQ_API const char* mq_version(void);

/* Description of the most recent failure on this thread. Never NULL. */
MQ_API const char* mq_last_error(void);

MQ_API void mq_string_free(char* s);

MQ_API void mq_table_free(mq_table* t);
MQ_API int64_t mq_table_rows(const mq_table* t);
MQ_API int64_t mq_table_cols(const mq_table* t);
/* Column name, or NULL if col is out of range. */
MQ_API const char* mq_table_column_name(const mq_table* t, int64_t col);
/* Row-major contiguous values; valid while the table is alive. */
MQ_API const double* mq_table_data(const mq_table* t);
MQ_API mq_status mq_table_value(const mq_table* t, int64_t row, int64_t col, double* out);

/* Bloch vector of exp(-i rz Z) exp(-i rx X) |0>. */
MQ_API mq_status mq_bloch_from_prep(double rz, double rx, double out[3]);

/* Affine Bloch-space action of one interaction step with the gate angle theta
 * and the given current-qubit Bloch vector: v -> e v + k. e is row-major. */
MQ_API mq_status mq_channel_map(double theta, int mode, const double current[3],
                                double out_e[9], double out_k[3]);

/* Fixed point of the channel map. degenerate is set to 1 when I - e is
 * singular (a family of fixed points); family_dim gives its dimension and
 * point one representative. residual = |e p + k - p|. */
MQ_API mq_status mq_steady_state(double theta, int mode, const double current[3],
                                 double out_point[3], int* degenerate, int* family_dim,
                                 double* residual);

/* Oscillatory-drive current-voltage loop.
 * Columns: t, zc_in, zc_out, zr_out. */
MQ_API mq_status mq_hysteresis_loop(double theta, double delta_phi, int eta_imag,
                                    int64_t periods, mq_table** out);

/* Final closed cycle of the loop (one period plus the closing point). */
MQ_API mq_status mq_hysteresis_last_cycle(double theta, double delta_phi, int eta_imag,
                                          int64_t periods, mq_table** out);

/* Short gate sequences spanning the last cycle, as runnable on hardware.
 * Columns: segment, t, zc_in, zc_out, zr_out. */
MQ_API mq_status mq_hardware_segments(double theta, double delta_phi, int eta_imag,
                                      mq_table** out);

/* Potentiation/depression staircase: four 100-step constant-drive segments
 * with currents |1>, |0>, |1>, |+>.
 * Columns: t, zc_in, zc_out, zr_out, xr, yr, zr. */
MQ_API mq_status mq_plasticity_trace(double theta, mq_table** out);

/* Repeated encoding steps with the current prepared each step in
 * exp(-i rz Z) exp(-i rx X) |0>.
 * Columns: t, zc_in, zc_out, zr_out, xr, yr, zr, fidelity. */
MQ_API mq_status mq_encoding_trace(double theta, double rz, double rx, int64_t steps,
                                   mq_table** out);

/* Compile a logical operation to a connection program and verify it by
 * simulation. task: "write" | "read" | "rotate" | "cnot". phi and theta are
 * used by "rotate" only; visit_once selects the restricted construction.
 * Returns the program, resource counts, and verification report as JSON. */
MQ_API mq_status mq_compile(const char* task, double phi, double theta, int visit_once,
                            int random_cases, uint64_t seed, char** json_out);

/* Fully connected network description, suitable for mq_network_eval. */
MQ_API mq_status mq_network_template(int m, int n, char** json_out);

/* Evaluate a network on an input state and return the outcome distribution
 * over the hidden-qubit Z measurements. state_kind: "ghz" | "plus" | "basis"
 * (basis_index selects the computational basis state for "basis").
 * Columns: outcome, probability. */
MQ_API mq_status mq_network_eval(const char* spec_json, const char* state_kind,
                                 uint64_t basis_index, mq_table** out);

/* Draw a multinomial sample from a distribution table produced by
 * mq_network_eval. Columns: outcome, count. */
MQ_API mq_status mq_sample_counts(const mq_table* distribution, int64_t shots,
                                  uint64_t seed, mq_table** out);

/* Train a classifier network. task: "bell" (m must be 2, four entangled-pair
 * classes) or "ghz-plus" (two classes). Search runs `restarts` independent
 * simplex searches of `budget` evaluations each, then `refine_rounds` local
 * rounds of `refine_budget` evaluations (0 -> budget) from the incumbent.
 * threads caps worker threads (0 -> hardware limit; the MEMRISTORQ_THREADS
 * environment variable always caps). Deterministic for fixed inputs.
 * result_json receives the parameters and objective; trajectory_csv the
 * per-iteration best objective. Either output pointer may be NULL. */
MQ_API mq_status mq_classify(const char* task, int m, int n, int frozen_phi,
                             int64_t budget, int restarts, uint64_t seed, int threads,
                             int refine_rounds, int64_t refine_budget, char** result_json,
                             char** trajectory_csv);

/* Objective of a classifier network at explicit parameters, without
 * optimization. phi has (connections + n) entries, theta (connections). */
MQ_API mq_status mq_classify_objective(const char* task, int m, int n, const double* phi,
                                       int64_t phi_len, const double* theta,
                                       int64_t theta_len, double* out_objective,
                                       double* out_mean_distance);

#ifdef __cplusplus
}
#endif

#endif
