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

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "commstream/adwin.hpp"
#include "commstream/commstream.h"
#include "commstream/errors.hpp"
#include "commstream/hoeffding.hpp"
#include "commstream/io.hpp"
#include "commstream/knn.hpp"
#include "commstream/pipeline.hpp"
#include "commstream/stream.hpp"

using namespace commstream;

struct cs_adwin {
  AdwinDetector detector;
};

struct cs_tree {
  HoeffdingTree tree;
};

struct cs_knn {
  KnnModel model;
};

struct cs_dataset {
  std::vector<Instance> instances;
};

struct cs_report {
  std::string text;
  std::vector<std::string> warnings;
  std::optional<ConfusionMatrix> tree;
  std::optional<ConfusionMatrix> knn;
};

namespace {

thread_local std::string last_error;

template <class F>
cs_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return CS_OK;
  } catch (const ArgumentError& e) {
    last_error = e.what();
    return CS_ERR_ARGUMENT;
  } catch (const SchemaError& e) {
    last_error = e.what();
    return CS_ERR_SCHEMA;
  } catch (const IngestError& e) {
    last_error = e.what();
    return CS_ERR_INGEST;
  } catch (const NumericsError& e) {
    last_error = e.what();
    return CS_ERR_NUMERICS;
  } catch (const EmptyWindowError& e) {
    last_error = e.what();
    return CS_ERR_EMPTY_WINDOW;
  } catch (const EmptyModelError& e) {
    last_error = e.what();
    return CS_ERR_EMPTY_MODEL;
  } catch (const IoError& e) {
    last_error = e.what();
    return CS_ERR_IO;
  } catch (const std::filesystem::filesystem_error& e) {
    last_error = e.what();
    return CS_ERR_IO;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return CS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return CS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return CS_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr)
    throw ArgumentError(std::string(what) + " must not be NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

TreeParams to_params(const cs_tree_params& p) {
  TreeParams t;
  t.grace_period = p.grace_period;
  t.split_confidence = p.split_confidence;
  t.tie_threshold = p.tie_threshold;
  t.range = p.range;
  t.drift_delta = p.drift_delta;
  t.drift_detection = p.drift_detection != 0;
  return t;
}

Label to_label(cs_label l) {
  if (l != CS_LABEL_SUCCESS && l != CS_LABEL_FAIL) {
    throw ArgumentError("unknown label value");
  }
  return l == CS_LABEL_FAIL ? Label::fail : Label::success;
}

cs_label from_label(Label l) {
  return l == Label::fail ? CS_LABEL_FAIL : CS_LABEL_SUCCESS;
}

std::span<const double> features_of(const double* f, std::size_t n) {
  if (n > 0) require(f, "features");
  return {f, n};
}

RunConfig to_config(const cs_run_options* options) {
  cs_run_options defaults;
  cs_run_options_default(&defaults);
  const cs_run_options& o = options ? *options : defaults;
  return {to_params(o.tree), o.warmup};
}

}  // namespace

extern "C" {

const char* cs_last_error(void) { return last_error.c_str(); }

const char* cs_version(void) { return "1.0.0"; }

void cs_string_free(char* s) { std::free(s); }

cs_status cs_adwin_create(double delta, cs_adwin** out) {
  return guarded([&] {
    require(out, "out");
    *out = new cs_adwin{AdwinDetector(delta)};
  });
}

void cs_adwin_destroy(cs_adwin* adwin) { delete adwin; }

cs_status cs_adwin_update(cs_adwin* adwin, double value, cs_drift_signal* out) {
  return guarded([&] {
    require(adwin, "adwin");
    const DriftSignal s = adwin->detector.update(value);
    if (out) {
      out->drift_detected = s.drift_detected ? 1 : 0;
      out->window_size_after = s.window_size_after;
      out->has_cut_index = s.cut_index ? 1 : 0;
      out->cut_index = s.cut_index.value_or(0);
    }
  });
}

cs_status cs_adwin_stats(const cs_adwin* adwin, uint64_t* size, double* mean,
                         double* variance) {
  return guarded([&] {
    require(adwin, "adwin");
    const WindowStats s = adwin->detector.window_stats();
    if (size) *size = s.size;
    if (mean) *mean = s.mean;
    if (variance) *variance = s.variance;
  });
}

void cs_tree_params_default(cs_tree_params* params) {
  if (params == nullptr) return;
  const TreeParams d;
  params->grace_period = static_cast<uint32_t>(d.grace_period);
  params->split_confidence = d.split_confidence;
  params->tie_threshold = d.tie_threshold;
  params->range = d.range;
  params->drift_delta = d.drift_delta;
  params->drift_detection = d.drift_detection ? 1 : 0;
}

cs_status cs_tree_create(const cs_tree_params* params, const char* const* names,
                         size_t count, cs_tree** out) {
  return guarded([&] {
    require(out, "out");
    cs_tree_params p;
    cs_tree_params_default(&p);
    if (params) p = *params;
    std::vector<std::string> attrs;
    if (names != nullptr) {
      if (count == 0) throw ArgumentError("tree needs at least one attribute");
      for (size_t i = 0; i < count; ++i) {
        require(names[i], "attribute name");
        attrs.emplace_back(names[i]);
      }
    }
    *out = new cs_tree{HoeffdingTree(to_params(p), std::move(attrs))};
  });
}

void cs_tree_destroy(cs_tree* tree) { delete tree; }

cs_status cs_tree_train(cs_tree* tree, const double* features, size_t count,
                        cs_label label, size_t* drift_events) {
  return guarded([&] {
    require(tree, "tree");
    const auto f = features_of(features, count);
    Instance inst{std::vector<double>(f.begin(), f.end()), to_label(label), {}};
    const auto events = tree->tree.train(inst);
    if (drift_events) *drift_events = events.size();
  });
}

cs_status cs_tree_predict(const cs_tree* tree, const double* features,
                          size_t count, cs_label* predicted, double* votes_fail,
                          double* votes_success) {
  return guarded([&] {
    require(tree, "tree");
    require(predicted, "predicted");
    const VoteReport r = tree->tree.predict(features_of(features, count));
    *predicted = from_label(r.predicted);
    if (votes_fail) *votes_fail = r.votes_fail;
    if (votes_success) *votes_success = r.votes_success;
  });
}

cs_status cs_tree_render(const cs_tree* tree, char** text) {
  return guarded([&] {
    require(tree, "tree");
    require(text, "text");
    *text = copy_string(tree->tree.render());
  });
}

cs_status cs_tree_to_dot(const cs_tree* tree, char** dot) {
  return guarded([&] {
    require(tree, "tree");
    require(dot, "dot");
    *dot = copy_string(tree->tree.to_dot());
  });
}

cs_status cs_tree_to_json(const cs_tree* tree, char** json) {
  return guarded([&] {
    require(tree, "tree");
    require(json, "json");
    *json = copy_string(tree->tree.to_json().dump());
  });
}

cs_status cs_tree_from_json(const char* json, cs_tree** out) {
  return guarded([&] {
    require(json, "json");
    require(out, "out");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json);
    } catch (const nlohmann::json::exception& e) {
      throw SchemaError(std::string("tree document is not JSON: ") + e.what());
    }
    *out = new cs_tree{HoeffdingTree::from_json(doc)};
  });
}

cs_status cs_knn_create(size_t k, cs_knn** out) {
  return guarded([&] {
    require(out, "out");
    *out = new cs_knn{KnnModel(k)};
  });
}

void cs_knn_destroy(cs_knn* knn) { delete knn; }

cs_status cs_knn_insert(cs_knn* knn, const double* features, size_t count,
                        cs_label label) {
  return guarded([&] {
    require(knn, "knn");
    knn->model.insert(features_of(features, count), to_label(label));
  });
}

cs_status cs_knn_predict(const cs_knn* knn, const double* features,
                         size_t count, cs_label* predicted) {
  return guarded([&] {
    require(knn, "knn");
    require(predicted, "predicted");
    *predicted = from_label(knn->model.predict(features_of(features, count)));
  });
}

void cs_synth_options_default(cs_synth_options* options) {
  if (options == nullptr) return;
  const SynthConfig d = SynthConfig::communication();
  options->n_instances = d.n_instances;
  options->success_weight = d.success_weight;
  options->fail_weight = d.fail_weight;
  options->seed = d.seed;
  options->preset = nullptr;
  options->drift_at = -1;
}

cs_status cs_dataset_load_csv(const char* path, cs_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::istringstream in(read_file(path));
    const auto rows = read_features_csv(in, path);
    *out = new cs_dataset{to_instances(rows)};
  });
}

cs_status cs_dataset_synth(const cs_synth_options* options, cs_dataset** out) {
  return guarded([&] {
    require(out, "out");
    cs_synth_options o;
    cs_synth_options_default(&o);
    if (options) o = *options;
    const std::string preset = o.preset ? o.preset : "communication";
    SynthConfig config;
    if (preset == "communication") {
      config = SynthConfig::communication(o.seed);
    } else if (preset == "separable") {
      config = SynthConfig::separable(o.seed);
    } else if (preset == "zero-information") {
      config = SynthConfig::zero_information(o.seed);
    } else {
      throw ArgumentError("unknown synthetic preset '" + preset + "'");
    }
    config.n_instances = o.n_instances;
    config.success_weight = o.success_weight;
    config.fail_weight = o.fail_weight;
    if (o.drift_at >= 0) {
      config.concepts.push_back(config.concepts.front().flipped());
      config.drift_points.push_back({static_cast<std::size_t>(o.drift_at), 1});
    }
    *out = new cs_dataset{synth_stream(config)};
  });
}

void cs_dataset_destroy(cs_dataset* dataset) { delete dataset; }

size_t cs_dataset_size(const cs_dataset* dataset) {
  return dataset ? dataset->instances.size() : 0;
}

cs_status cs_dataset_write_csv(const cs_dataset* dataset, const char* path) {
  return guarded([&] {
    require(dataset, "dataset");
    require(path, "path");
    std::vector<FeatureRow> rows;
    rows.reserve(dataset->instances.size());
    for (const auto& inst : dataset->instances) {
      rows.push_back(
          {inst.id, inst.label, FeatureVector::from_values(inst.features)});
    }
    std::ostringstream csv;
    write_features_csv(csv, rows);
    write_file(path, csv.str());
  });
}

void cs_run_options_default(cs_run_options* options) {
  if (options == nullptr) return;
  cs_tree_params_default(&options->tree);
  options->warmup = kDefaultWarmup;
}

cs_status cs_extract(const char* builds_path, const char* items_path,
                     const char* out_csv, cs_report** report) {
  return guarded([&] {
    require(builds_path, "builds_path");
    require(items_path, "items_path");
    require(out_csv, "out_csv");
    auto r = std::make_unique<cs_report>();
    const auto rows = extract_rows(builds_path, items_path, &r->warnings);
    std::ostringstream csv;
    write_features_csv(csv, rows);
    write_file(out_csv, csv.str());
    r->text = std::to_string(rows.size());
    if (report) *report = r.release();
  });
}

cs_status cs_run(const cs_dataset* dataset, const cs_run_options* options,
                 const char* out_dir, cs_report** report) {
  return guarded([&] {
    require(dataset, "dataset");
    auto r = std::make_unique<cs_report>();
    RunOutcome outcome = run_experiment(dataset->instances, to_config(options),
                                        out_dir ? out_dir : "");
    r->text = outcome.summary.dump(2);
    r->warnings = std::move(outcome.warnings);
    r->tree = outcome.log.confusion();
    if (report) *report = r.release();
  });
}

cs_status cs_compare(const cs_dataset* dataset, const cs_run_options* options,
                     size_t k, int resubstitution, cs_report** report) {
  return guarded([&] {
    require(dataset, "dataset");
    auto r = std::make_unique<cs_report>();
    const CompareOutcome outcome = compare_models(
        dataset->instances, to_config(options), k, resubstitution != 0);
    r->text = outcome.table;
    r->tree = outcome.tree;
    r->knn = outcome.knn;
    if (report) *report = r.release();
  });
}

cs_status cs_synth_corpus(size_t n_builds, uint64_t seed,
                          const char* builds_path, const char* items_path) {
  return guarded([&] {
    require(builds_path, "builds_path");
    require(items_path, "items_path");
    const SynthCorpus corpus = synth_corpus(n_builds, seed);
    std::ostringstream builds, items;
    write_builds_jsonl(builds, corpus.builds);
    write_work_items_jsonl(items, corpus.items);
    write_file(builds_path, builds.str());
    write_file(items_path, items.str());
  });
}

void cs_report_destroy(cs_report* report) { delete report; }

const char* cs_report_text(const cs_report* report) {
  return report ? report->text.c_str() : "";
}

size_t cs_report_warning_count(const cs_report* report) {
  return report ? report->warnings.size() : 0;
}

const char* cs_report_warning(const cs_report* report, size_t index) {
  if (report == nullptr || index >= report->warnings.size()) return nullptr;
  return report->warnings[index].c_str();
}

cs_status cs_report_confusion(const cs_report* report, cs_model model,
                              cs_confusion* out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    const auto& cm = model == CS_MODEL_KNN ? report->knn : report->tree;
    if (!cm)
      throw ArgumentError("report has no confusion matrix for that model");
    out->success_correct = cm->success_correct;
    out->success_incorrect = cm->success_incorrect;
    out->fail_correct = cm->fail_correct;
    out->fail_incorrect = cm->fail_incorrect;
  });
}

double cs_report_accuracy(const cs_report* report, cs_model model) {
  if (report == nullptr) return 0.0;
  const auto& cm = model == CS_MODEL_KNN ? report->knn : report->tree;
  return cm ? cm->accuracy() : 0.0;
}

}  // extern "C"
