/* sepkit/capi.h
 *
 * Copyright 2026  The sepkit project authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *  http://www.apache.org/licenses/LICENSE-2.0
 *
 * THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
 * KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
 * WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
 * MERCHANTABLITY OR NON-INFRINGEMENT.
 * See the Apache 2 License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the sepkit speech separation + denoising toolkit.
 *
 * Every function returns SK_OK on success or an error code; sk_last_error()
 * gives a thread-local human-readable detail for the most recent failure on
 * the calling thread. Opaque handles are created and released in pairs
 * (sk_model_load / sk_model_free, ...). The sk_*_run entry points accept the
 * same JSON configs the bundled CLI builds from its flags.
 */

#ifndef SEPKIT_CAPI_H_
#define SEPKIT_CAPI_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SK_API __declspec(dllexport)
#else
#define SK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sk_status {
  SK_OK = 0,
  SK_ERR_INVALID_ARGUMENT = 1, /* a documented precondition was broken */
  SK_ERR_DEGENERATE_SIGNAL = 2,
  SK_ERR_IO = 3,
  SK_ERR_BAD_CHECKPOINT = 4,
  SK_ERR_INTERNAL = 5,
} sk_status;

SK_API const char* sk_version(void);
SK_API const char* sk_status_name(sk_status status);
SK_API const char* sk_last_error(void);

/* -- metrics ------------------------------------------------------------- */

/* Scale-invariant SNR in dB, saturated at +/-30. */
SK_API sk_status sk_si_snr(const double* estimate, const double* reference,
                           size_t len, double* out_db);

/* si_snr(estimate, reference) - si_snr(mixture, reference). */
SK_API sk_status sk_si_snr_improvement(const double* estimate,
                                       const double* reference,
                                       const double* mixture, size_t len,
                                       double* out_db);

/* -- model handle ---------------------------------------------------------*/

typedef struct sk_model sk_model;

SK_API sk_status sk_model_load(const char* checkpoint_path,
                               sk_model** out_model);
SK_API void sk_model_free(sk_model* model);
SK_API sk_status sk_model_num_parameters(const sk_model* model,
                                         uint64_t* out_count);
/* JSON description of the model configuration; free with sk_string_free. */
SK_API sk_status sk_model_config_json(const sk_model* model, char** out_json);
SK_API void sk_string_free(char* s);

/* -- recursive separation ------------------------------------------------ */

typedef struct sk_separation sk_separation;

/* stop_spec: "known:K", "residual", "residual:<db>", or "max". */
SK_API sk_status sk_separate(const sk_model* model, const double* mixture,
                             size_t len, int sample_rate,
                             const char* stop_spec, int max_iterations,
                             sk_separation** out_separation);
SK_API size_t sk_separation_count(const sk_separation* separation);
SK_API sk_status sk_separation_source(const sk_separation* separation,
                                      size_t index, const double** out_data,
                                      size_t* out_len);
SK_API sk_status sk_separation_residual(const sk_separation* separation,
                                        const double** out_data,
                                        size_t* out_len);
SK_API const char* sk_separation_stop_reason(const sk_separation* separation);
SK_API void sk_separation_free(sk_separation* separation);

/* -- toolkit operations (JSON-configured, mirror the CLI subcommands) ----- */

typedef void (*sk_progress_fn)(const char* line, void* user_data);

SK_API sk_status sk_synth_run(const char* config_json, sk_progress_fn progress,
                              void* user_data);
SK_API sk_status sk_train_run(const char* config_json, sk_progress_fn progress,
                              void* user_data);
SK_API sk_status sk_separate_run(const char* config_json,
                                 sk_progress_fn progress, void* user_data);
SK_API sk_status sk_eval_run(const char* config_json, sk_progress_fn progress,
                             void* user_data);

#ifdef __cplusplus
}
#endif

#endif /* SEPKIT_CAPI_H_ */
