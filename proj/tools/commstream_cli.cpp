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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "commstream/commstream.h"

namespace {

// Schema, ingest and argument problems exit 1; file system problems exit 2.
int exit_code(cs_status status) {
  if (status == CS_OK) return 0;
  return status == CS_ERR_IO ? 2 : 1;
}

int fail(cs_status status) {
  std::fprintf(stderr, "error: %s\n", cs_last_error());
  return exit_code(status);
}

void print_warnings(const cs_report* report) {
  for (size_t i = 0; i < cs_report_warning_count(report); ++i) {
    std::fprintf(stderr, "warning: %s\n", cs_report_warning(report, i));
  }
}

struct DatasetFlags {
  std::string features;
  bool synth = false;
  std::string preset = "communication";
  size_t instances = 199;
  long long drift_at = -1;
  unsigned long long seed = 1;

  void attach(CLI::App& app) {
    auto* csv = app.add_option("--features", features, "Feature CSV to read");
    auto* syn = app.add_flag("--synth", synth,
                             "Use a synthetic stream instead of a CSV");
    csv->excludes(syn);
    app.add_option(
           "--preset", preset,
           "Synthetic preset: communication, separable, zero-information")
        ->capture_default_str();
    app.add_option("--instances", instances, "Synthetic stream length")
        ->capture_default_str();
    app.add_option("--drift-at", drift_at,
                   "Swap the class-conditional distributions at this index")
        ->capture_default_str();
    app.add_option("--seed", seed, "Seed for all randomness")
        ->capture_default_str();
  }

  cs_status load(cs_dataset** out) const {
    if (!synth) {
      if (features.empty()) {
        std::fprintf(stderr,
                     "error: one of --features or --synth is required\n");
        return CS_ERR_ARGUMENT;
      }
      return cs_dataset_load_csv(features.c_str(), out);
    }
    cs_synth_options o;
    cs_synth_options_default(&o);
    o.n_instances = instances;
    o.seed = seed;
    o.preset = preset.c_str();
    o.drift_at = drift_at;
    return cs_dataset_synth(&o, out);
  }
};

struct ModelFlags {
  cs_run_options options{};

  ModelFlags() { cs_run_options_default(&options); }

  void attach(CLI::App& app) {
    app.add_option("--grace", options.tree.grace_period, "Grace period")
        ->capture_default_str();
    app.add_option("--split-confidence", options.tree.split_confidence,
                   "Split confidence (delta)")
        ->capture_default_str();
    app.add_option("--tie-threshold", options.tree.tie_threshold,
                   "Tie threshold")
        ->capture_default_str();
    app.add_option("--drift-delta", options.tree.drift_delta,
                   "ADWIN confidence for drift detection")
        ->capture_default_str();
    app.add_option("--warmup", options.warmup,
                   "Leading instances used for training only")
        ->capture_default_str();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build-outcome prediction from developer communication streams"};
  app.require_subcommand(1);

  std::string builds, items, out;
  auto* extract = app.add_subcommand(
      "extract", "Compute the feature CSV from JSONL records");
  extract->add_option("--builds", builds, "Builds JSONL")->required();
  extract->add_option("--items", items, "Work items JSONL")->required();
  extract->add_option("--out", out, "Output CSV")->required();

  DatasetFlags run_data;
  ModelFlags run_model;
  std::string run_out;
  auto* run =
      app.add_subcommand("run", "Prequential Hoeffding tree evaluation");
  run_data.attach(*run);
  run_model.attach(*run);
  run->add_option("--out", run_out, "Output directory")->required();

  DatasetFlags cmp_data;
  ModelFlags cmp_model;
  size_t k = 5;
  bool resubstitution = false;
  auto* compare = app.add_subcommand("compare", "Hoeffding tree versus k-NN");
  cmp_data.attach(*compare);
  cmp_model.attach(*compare);
  compare->add_option("--k", k, "Neighbours for k-NN")->capture_default_str();
  compare->add_flag("--resubstitution", resubstitution,
                    "Score k-NN on the instances it was fitted on");

  std::string corpus_builds, corpus_items;
  size_t corpus_count = 199;
  unsigned long long corpus_seed = 1;
  auto* corpus = app.add_subcommand(
      "synth-corpus", "Write synthetic builds and work items as JSONL");
  corpus->add_option("--builds", corpus_builds, "Builds JSONL to write")
      ->required();
  corpus->add_option("--items", corpus_items, "Work items JSONL to write")
      ->required();
  corpus->add_option("--count", corpus_count, "Number of builds")
      ->capture_default_str();
  corpus->add_option("--seed", corpus_seed, "Seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*extract) {
    cs_report* report = nullptr;
    const cs_status s =
        cs_extract(builds.c_str(), items.c_str(), out.c_str(), &report);
    if (s != CS_OK) return fail(s);
    print_warnings(report);
    std::printf("wrote %s feature rows to %s\n", cs_report_text(report),
                out.c_str());
    cs_report_destroy(report);
    return 0;
  }

  if (*run || *compare) {
    const DatasetFlags& data = *run ? run_data : cmp_data;
    const ModelFlags& model = *run ? run_model : cmp_model;
    cs_dataset* dataset = nullptr;
    cs_status s = data.load(&dataset);
    if (s != CS_OK) return data.features.empty() && !data.synth ? 1 : fail(s);
    cs_report* report = nullptr;
    if (*run) {
      s = cs_run(dataset, &model.options, run_out.c_str(), &report);
    } else {
      s = cs_compare(dataset, &model.options, k, resubstitution ? 1 : 0,
                     &report);
    }
    cs_dataset_destroy(dataset);
    if (s != CS_OK) return fail(s);
    print_warnings(report);
    if (*run) {
      cs_confusion cm;
      cs_report_confusion(report, CS_MODEL_TREE, &cm);
      std::printf("scored %llu instances, accuracy %.4f; outputs in %s\n",
                  static_cast<unsigned long long>(
                      cm.success_correct + cm.success_incorrect +
                      cm.fail_correct + cm.fail_incorrect),
                  cs_report_accuracy(report, CS_MODEL_TREE), run_out.c_str());
    } else {
      std::fputs(cs_report_text(report), stdout);
    }
    cs_report_destroy(report);
    return 0;
  }

  if (*corpus) {
    const cs_status s = cs_synth_corpus(
        corpus_count, corpus_seed, corpus_builds.c_str(), corpus_items.c_str());
    if (s != CS_OK) return fail(s);
    std::printf("wrote %zu builds to %s\n", corpus_count,
                corpus_builds.c_str());
    return 0;
  }
  return 1;
}
