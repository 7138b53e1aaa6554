// Copyright 2026, The commstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to the commstream library.
 *
 * Every object is an opaque handle created by a cs_*_create / cs_*_load
 * function and released by the matching cs_*_destroy. Functions that can fail
 * return a cs_status; on failure cs_last_error() describes the problem for the
 * calling thread. Strings returned through char** are owned by the caller and
 * released with cs_string_free.
 */

#ifndef COMMSTREAM_COMMSTREAM_H_
#define COMMSTREAM_COMMSTREAM_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(COMMSTREAM_BUILDING)
#define CS_API __declspec(dllexport)
#else
#define CS_API __declspec(dllimport)
#endif
#else
#define CS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cs_status {
  CS_OK = 0,
  CS_ERR_ARGUMENT = 1,
  CS_ERR_SCHEMA = 2,
  CS_ERR_INGEST = 3,
  CS_ERR_NUMERICS = 4,
  CS_ERR_EMPTY_WINDOW = 5,
  CS_ERR_EMPTY_MODEL = 6,
  CS_ERR_IO = 7,
  CS_ERR_INTERNAL = 8
} cs_status;

typedef enum cs_label { CS_LABEL_SUCCESS = 0, CS_LABEL_FAIL = 1 } cs_label;

/* Message of the last failed call on this thread; "" if none. */
CS_API const char* cs_last_error(void);
CS_API const char* cs_version(void);
CS_API void cs_string_free(char* s);

/* ---- ADWIN change detector ------------------------------------------- */

typedef struct cs_adwin cs_adwin;

typedef struct cs_drift_signal {
  int drift_detected;
  uint64_t window_size_after;
  int has_cut_index;
  uint64_t cut_index;
} cs_drift_signal;

CS_API cs_status cs_adwin_create(double delta, cs_adwin** out);
CS_API void cs_adwin_destroy(cs_adwin* adwin);
CS_API cs_status cs_adwin_update(cs_adwin* adwin, double value,
                                 cs_drift_signal* out);
CS_API cs_status cs_adwin_stats(const cs_adwin* adwin, uint64_t* size,
                                double* mean, double* variance);

/* ---- Hoeffding tree --------------------------------------------------- */

typedef struct cs_tree cs_tree;

typedef struct cs_tree_params {
  uint32_t grace_period;
  double split_confidence;
  double tie_threshold;
  double range;
  double drift_delta;
  int drift_detection;
} cs_tree_params;

CS_API void cs_tree_params_default(cs_tree_params* params);

/* names may be NULL (count ignored) for the fifteen communication features. */
CS_API cs_status cs_tree_create(const cs_tree_params* params,
                                const char* const* names, size_t count,
                                cs_tree** out);
CS_API void cs_tree_destroy(cs_tree* tree);
/* drift_events may be NULL. */
CS_API cs_status cs_tree_train(cs_tree* tree, const double* features,
                               size_t count, cs_label label,
                               size_t* drift_events);
/* votes_fail / votes_success may be NULL. */
CS_API cs_status cs_tree_predict(const cs_tree* tree, const double* features,
                                 size_t count, cs_label* predicted,
                                 double* votes_fail, double* votes_success);
CS_API cs_status cs_tree_render(const cs_tree* tree, char** text);
CS_API cs_status cs_tree_to_dot(const cs_tree* tree, char** dot);
CS_API cs_status cs_tree_to_json(const cs_tree* tree, char** json);
CS_API cs_status cs_tree_from_json(const char* json, cs_tree** out);

/* ---- k-NN ------------------------------------------------------------- */

typedef struct cs_knn cs_knn;

CS_API cs_status cs_knn_create(size_t k, cs_knn** out);
CS_API void cs_knn_destroy(cs_knn* knn);
CS_API cs_status cs_knn_insert(cs_knn* knn, const double* features,
                               size_t count, cs_label label);
CS_API cs_status cs_knn_predict(const cs_knn* knn, const double* features,
                                size_t count, cs_label* predicted);

/* ---- Datasets of labelled feature vectors ----------------------------- */

typedef struct cs_dataset cs_dataset;

typedef struct cs_synth_options {
  size_t n_instances;
  double success_weight;
  double fail_weight;
  uint64_t seed;
  /* "communication", "separable" or "zero-information"; NULL means
     "communication". */
  const char* preset;
  /* Index at which the class-conditional distributions swap; negative for
     none. */
  int64_t drift_at;
} cs_synth_options;

CS_API void cs_synth_options_default(cs_synth_options* options);
CS_API cs_status cs_dataset_load_csv(const char* path, cs_dataset** out);
CS_API cs_status cs_dataset_synth(const cs_synth_options* options,
                                  cs_dataset** out);
CS_API void cs_dataset_destroy(cs_dataset* dataset);
CS_API size_t cs_dataset_size(const cs_dataset* dataset);
CS_API cs_status cs_dataset_write_csv(const cs_dataset* dataset,
                                      const char* path);

/* ---- Commands --------------------------------------------------------- */

typedef struct cs_report cs_report;

typedef struct cs_run_options {
  cs_tree_params tree;
  size_t warmup;
} cs_run_options;

typedef struct cs_confusion {
  uint64_t success_correct;
  uint64_t success_incorrect;
  uint64_t fail_correct;
  uint64_t fail_incorrect;
} cs_confusion;

typedef enum cs_model { CS_MODEL_TREE = 0, CS_MODEL_KNN = 1 } cs_model;

CS_API void cs_run_options_default(cs_run_options* options);

/* Writes the feature CSV for the builds, oldest first. */
CS_API cs_status cs_extract(const char* builds_path, const char* items_path,
                            const char* out_csv, cs_report** report);
/* out_dir may be NULL to skip writing files. */
CS_API cs_status cs_run(const cs_dataset* dataset,
                        const cs_run_options* options, const char* out_dir,
                        cs_report** report);
CS_API cs_status cs_compare(const cs_dataset* dataset,
                            const cs_run_options* options, size_t k,
                            int resubstitution, cs_report** report);
/* Writes synthetic builds and work items as JSONL. */
CS_API cs_status cs_synth_corpus(size_t n_builds, uint64_t seed,
                                 const char* builds_path,
                                 const char* items_path);

CS_API void cs_report_destroy(cs_report* report);
/* Run: summary JSON. Compare: the comparison table. Extract: row count. */
CS_API const char* cs_report_text(const cs_report* report);
CS_API size_t cs_report_warning_count(const cs_report* report);
CS_API const char* cs_report_warning(const cs_report* report, size_t index);
CS_API cs_status cs_report_confusion(const cs_report* report, cs_model model,
                                     cs_confusion* out);
CS_API double cs_report_accuracy(const cs_report* report, cs_model model);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* COMMSTREAM_COMMSTREAM_H_ */
