// Copyright 2026 The vqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the vqc toolkit. Every function returns a vqc_status; on
 * failure vqc_last_error() holds a message for the calling thread. Options
 * structs must be filled by their *_init function before use. */

#ifndef VQC_VQC_H_
#define VQC_VQC_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(VQC_BUILDING_LIBRARY)
#define VQC_API __declspec(dllexport)
#else
#define VQC_API __declspec(dllimport)
#endif
#else
#define VQC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vqc_status {
    VQC_OK = 0,
    VQC_ERR_CONFIG = 1,
    VQC_ERR_INDEX = 2,
    VQC_ERR_VALIDATION = 3,
    VQC_ERR_PARSE = 4,
    VQC_ERR_IO = 5,
    VQC_ERR_CALIBRATION = 6,
    VQC_ERR_CONVERGENCE = 7,
    VQC_ERR_NUMERICAL = 8,
    VQC_ERR_EMPTY_RESULT = 9,
    VQC_ERR_INTERNAL = 10
} vqc_status;

VQC_API const char* vqc_version(void);
VQC_API const char* vqc_last_error(void);
VQC_API const char* vqc_status_name(vqc_status status);
/* Process exit code for a status: 0 ok, 2 input error, 3 empty result,
 * 4 numerical failure. */
VQC_API int vqc_exit_code(vqc_status status);

/* ---- statevector ---- */

typedef struct vqc_state vqc_state;

VQC_API vqc_status vqc_state_create(int n_qubits, vqc_state** out);
VQC_API void vqc_state_destroy(vqc_state* state);
/* gate: RX RY RZ H S X Y Z CNOT; control is ignored unless gate is CNOT. */
VQC_API vqc_status vqc_state_apply(vqc_state* state, const char* gate, int target, int control, double angle);
VQC_API vqc_status vqc_state_norm(const vqc_state* state, double* out);
VQC_API vqc_status vqc_state_expectation_z(const vqc_state* state, int qubit, double* out);
/* histogram receives 2^n_measured counts indexed by outcome (bit j = measured[j]). */
VQC_API vqc_status vqc_state_sample(const vqc_state* state, const int* measured, size_t n_measured, uint64_t shots,
                                    uint64_t seed, uint64_t* histogram);

/* ---- circuits ---- */

typedef struct vqc_circuit vqc_circuit;

typedef struct vqc_circuit_info {
    int n_qubits;
    size_t n_embed;
    size_t n_params;
    size_t n_measured;
    size_t gate_count;
    size_t depth;
    int has_params;
} vqc_circuit_info;

VQC_API vqc_status vqc_circuit_load(const char* path, vqc_circuit** out);
VQC_API void vqc_circuit_destroy(vqc_circuit* circuit);
VQC_API vqc_status vqc_circuit_get_info(const vqc_circuit* circuit, vqc_circuit_info* out);
/* Noiseless <Z> of every measured qubit. params may be NULL to use the
 * parameters stored in the circuit file. */
VQC_API vqc_status vqc_circuit_expectations(const vqc_circuit* circuit, const double* features, size_t n_features,
                                            const double* params, size_t n_params, double* out, size_t n_out);

/* ---- pipeline stages ---- */

typedef struct vqc_preprocess_options {
    const char* input;
    const char* format; /* "qds" or "csv" */
    int n_classes;      /* csv only; 0 infers */
    int out_side;
    const char* output;
    uint64_t seed;
} vqc_preprocess_options;

VQC_API void vqc_preprocess_options_init(vqc_preprocess_options* options);
VQC_API vqc_status vqc_preprocess(const vqc_preprocess_options* options, size_t* n_samples, size_t* n_features);

typedef struct vqc_search_options {
    const char* prepared;
    const char* device; /* NULL or "": bundled device */
    const char* out_dir;
    uint64_t seed;
    int n_qubits;
    size_t n_params;
    size_t n_candidates;
    size_t m_replicas;
    uint64_t replica_shots;
    double cnr_threshold;
    double alpha_cnr;
    size_t d_c;
    size_t repcap_param_draws;
} vqc_search_options;

typedef struct vqc_search_summary {
    size_t n_candidates;
    size_t n_survivors;
    double best_f_score; /* NaN without survivors */
} vqc_search_summary;

VQC_API void vqc_search_options_init(vqc_search_options* options);
VQC_API vqc_status vqc_search(const vqc_search_options* options, vqc_search_summary* summary);

typedef struct vqc_train_options {
    const char* circuit;
    const char* prepared;
    const char* out_dir;
    uint64_t seed;
    int epochs;
    double learning_rate;
    size_t batch_size;
    const char* loss;     /* "auto", "mse" or "ce" */
    const char* gradient; /* "adjoint" or "shift" */
    double validation_fraction;
    int resume;
    int stop_after_epoch; /* < 0: run to `epochs` */
} vqc_train_options;

typedef struct vqc_train_summary {
    int epochs_completed;
    int best_epoch;
    double best_score;
    double final_loss;
} vqc_train_summary;

VQC_API void vqc_train_options_init(vqc_train_options* options);
VQC_API vqc_status vqc_train(const vqc_train_options* options, vqc_train_summary* summary);

typedef struct vqc_infer_options {
    const char* checkpoint;
    const char* prepared;
    const char* device;
    const char* out_dir;
    uint64_t seed;
    uint64_t shots;
    const char* mitigation; /* none, all, or dd/twirl/m3 joined by '+' */
    size_t max_test;        /* 0: all test samples */
    unsigned workers;
    double m3_tol;
    size_t m3_max_iter;
    uint64_t calibration_shots;
    int weighted_auc;
} vqc_infer_options;

typedef struct vqc_eval_summary {
    char config[32];
    double acc;
    double auc; /* NaN when undefined */
    size_t n_samples;
} vqc_eval_summary;

VQC_API void vqc_infer_options_init(vqc_infer_options* options);
VQC_API vqc_status vqc_infer(const vqc_infer_options* options, vqc_eval_summary* summary);
/* rows receives the four configurations none, DD+Twirl, M3, DD+Twirl+M3. */
VQC_API vqc_status vqc_ablate(const vqc_infer_options* options, vqc_eval_summary rows[4]);

/* *text is owned by the caller and released with vqc_string_free. */
VQC_API vqc_status vqc_report(const char* path, char** text);
VQC_API void vqc_string_free(char* text);

VQC_API vqc_status vqc_mitigate_files(const char* counts_path, const char* calibration_path, const char* output,
                                      double tol, size_t max_iter, size_t* iterations, double* residual);

/* kind: "two-blob", "four-corner" or "ring". */
VQC_API vqc_status vqc_synth(const char* kind, int n_per_class, int n_test_per_class, int side, uint64_t seed,
                             const char* output);
VQC_API vqc_status vqc_write_bundled_device(const char* output);

#ifdef __cplusplus
}
#endif

#endif /* VQC_VQC_H_ */
