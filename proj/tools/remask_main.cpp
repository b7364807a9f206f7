// remask: domain-cue masking and evaluation from the command line.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "remask/affinity.hpp"
#include "remask/bridge_client.hpp"
#include "remask/classifier.hpp"
#include "remask/config.hpp"
#include "remask/corpus.hpp"
#include "remask/error.hpp"
#include "remask/eval.hpp"
#include "remask/infill.hpp"
#include "remask/pipeline.hpp"
#include "remask/records.hpp"
#include "remask/synthetic.hpp"

namespace {

using namespace remask;

constexpr const char* kPipelineKeys[] = {
    "tau1",          "tau2",       "tau2-quantile",   "tau3",         "saliency",
    "saliency-file", "unmask-strategy", "ngram-orders", "smoothing",  "min-doc-freq",
    "max-tokens",    "mask-sentinel",   "ablation",     "seed"};

// Pipeline settings: an optional config file, then any flag given explicitly.
struct PipelineFlags {
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  bool merge = false;
  CLI::Option* merge_option = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "key=value config file")->check(CLI::ExistingFile);
    for (const char* key : kPipelineKeys) {
      options[key] = app->add_option(std::string("--") + key, values[key]);
    }
    options["tau2"]->excludes(options["tau2-quantile"]);
    options["saliency"]->excludes(options["saliency-file"]);
    merge_option = app->add_flag("--merge-consecutive", merge, "collapse adjacent sentinels");
  }

  PipelineConfig resolve() const {
    PipelineConfig config;
    if (!config_file.empty()) config = load_config_file(config_file);
    for (const char* key : kPipelineKeys) {
      if (options.at(key)->count() > 0) apply_config_value(config, key, values.at(key));
    }
    if (merge_option->count() > 0) config.merge_consecutive = merge;
    config.validate();
    return config;
  }
};

std::size_t default_workers() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("--sizes: expected comma-separated integers, got '" + text + "'");
    }
    sizes.push_back(std::stoul(item));
  }
  if (sizes.empty()) throw ConfigError("--sizes: empty list");
  return sizes;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

struct ModelInputs {
  std::optional<AffinityTable> table;
  std::unique_ptr<DomainScorer> scorer;
  std::optional<SaliencyMap> external;
};

// Loads or builds the table and classifier a pipeline run needs.
ModelInputs prepare(const Corpus& corpus, const PipelineConfig& config,
                    const std::string& table_path, const std::string& model_path,
                    const std::vector<std::string>& bridge_command) {
  ModelInputs in;
  in.table = table_path.empty() ? build_table(corpus, config.affinity_config())
                                : load_table(table_path);
  if (!bridge_command.empty()) {
    in.scorer = std::make_unique<BridgeScorer>(bridge_command, in.table->domains());
  } else if (!model_path.empty()) {
    auto model = load_model(model_path);
    model.set_mask_token(config.mask_sentinel);
    in.scorer = std::make_unique<NaiveBayesModel>(std::move(model));
  } else {
    auto model = train_classifier(corpus);
    model.set_mask_token(config.mask_sentinel);
    in.scorer = std::make_unique<NaiveBayesModel>(std::move(model));
  }
  if (config.saliency_file) in.external = load_external_saliency(*config.saliency_file, corpus);
  return in;
}

std::vector<ObfuscationResult> run_all(const ModelInputs& in, const std::vector<PipelineJob>& jobs,
                                       const PipelineConfig& config, std::size_t workers) {
  const auto saliency =
      in.external ? SaliencySource::external(*in.external) : SaliencySource::occlusion();
  return run_jobs(jobs, *in.table, *in.scorer, saliency, config, workers);
}

int run(int argc, char** argv) {
  CLI::App app{"remask: mask domain-specific cues in text"};
  app.require_subcommand(1);

  std::string corpus_path, out_path, table_path, model_path, records_path;
  std::size_t max_tokens = kDefaultMaxTokens;
  std::size_t workers = default_workers();

  // load
  auto* load = app.add_subcommand("load", "validate a corpus and print counts");
  load->add_option("--corpus", corpus_path)->required();
  load->add_option("--max-tokens", max_tokens);

  // stats
  PipelineFlags stats_flags;
  auto* stats = app.add_subcommand("stats", "build the domain affinity table");
  stats->add_option("--corpus", corpus_path)->required();
  stats->add_option("--out", out_path)->required();
  stats_flags.attach(stats);

  // train-clf
  double nb_smoothing = 1.0;
  auto* train = app.add_subcommand("train-clf", "train the bag-of-words domain classifier");
  train->add_option("--corpus", corpus_path)->required();
  train->add_option("--out", out_path)->required();
  train->add_option("--max-tokens", max_tokens);
  train->add_option("--nb-smoothing", nb_smoothing, "additive likelihood smoothing");

  // mask
  PipelineFlags mask_flags;
  std::string source, target;
  bool all_pairs = false, cyclic = false, no_trace = false;
  std::vector<std::string> bridge_command;
  auto* mask = app.add_subcommand("mask", "run the three-step masking pipeline");
  mask->add_option("--corpus", corpus_path)->required();
  mask->add_option("--table", table_path, "affinity table (built from the corpus if absent)");
  mask->add_option("--model", model_path, "classifier (trained on the corpus if absent)");
  mask->add_option("--bridge", bridge_command, "scorer process command line")->expected(1, -1);
  mask->add_option("--source", source);
  mask->add_option("--target", target);
  auto* all_opt = mask->add_flag("--all-pairs", all_pairs, "every document to every other domain");
  auto* cyc_opt = mask->add_flag("--cyclic", cyclic, "every document to the next domain");
  all_opt->excludes(cyc_opt);
  mask->add_option("--out", out_path, "masked-output file (stdout if absent)");
  mask->add_option("--workers", workers);
  mask->add_flag("--no-trace", no_trace, "omit the unmask trace");
  mask_flags.attach(mask);

  // infill
  std::uint64_t infill_seed = 0;
  std::size_t top_k = kInfillTopK;
  auto* infill = app.add_subcommand("infill", "fill final masks with target-domain words");
  infill->add_option("--corpus", corpus_path)->required();
  infill->add_option("--records", records_path)->required();
  infill->add_option("--table", table_path)->required();
  infill->add_option("--out", out_path);
  infill->add_option("--seed", infill_seed);
  infill->add_option("--top-k", top_k);
  infill->add_option("--max-tokens", max_tokens);

  // eval-leakage
  PipelineFlags leak_flags;
  std::string sizes_text = "400,1000,10000";
  std::size_t seeds = 1;
  std::string json_path;
  auto* leak = app.add_subcommand("eval-leakage", "domain classification on masked text");
  leak->add_option("--corpus", corpus_path)->required();
  leak->add_option("--records", records_path, "masked output (computed, cyclic targets, if absent)");
  leak->add_option("--table", table_path);
  leak->add_option("--model", model_path);
  leak->add_option("--sizes", sizes_text);
  leak->add_option("--seeds", seeds)->check(CLI::PositiveNumber);
  leak->add_option("--workers", workers);
  leak->add_option("--json", json_path, "also write the report as JSON");
  leak_flags.attach(leak);

  // mask-stats
  bool by_pair = false;
  auto* mstats = app.add_subcommand("mask-stats", "average mask counts per step");
  mstats->add_option("--records", records_path)->required();
  mstats->add_flag("--by-pair", by_pair, "one cell per source/target pair");
  mstats->add_option("--json", json_path, "also write the report as JSON");

  // synth
  SyntheticCorpusSpec spec;
  auto* synth = app.add_subcommand("synth", "write a synthetic planted-token corpus");
  synth->add_option("--out", out_path);
  synth->add_option("--documents", spec.documents);
  synth->add_option("--domains", spec.domains);
  synth->add_option("--seed", spec.seed);

  // export-requests
  auto* exportreq = app.add_subcommand("export-requests", "write scorer requests for a corpus");
  exportreq->add_option("--corpus", corpus_path)->required();
  exportreq->add_option("--out", out_path);
  exportreq->add_option("--max-tokens", max_tokens);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (load->parsed()) {
    const auto corpus = load_corpus(corpus_path, max_tokens);
    std::vector<std::size_t> counts(corpus.domains.size(), 0);
    for (const auto& doc : corpus.documents) ++counts[corpus.domain_of(doc)];
    std::cout << "documents " << corpus.documents.size() << '\n'
              << "domains " << corpus.domains.size() << '\n';
    for (DomainIndex d = 0; d < corpus.domains.size(); ++d) {
      std::cout << "  " << corpus.domains.label(d) << ' ' << counts[d] << '\n';
    }
  } else if (stats->parsed()) {
    const auto config = stats_flags.resolve();
    const auto corpus = load_corpus(corpus_path, config.max_tokens);
    const auto table = build_table(corpus, config.affinity_config());
    save_table(table, out_path);
    std::cerr << "wrote " << table.size() << " keys over " << table.domains().size()
              << " domains to " << out_path << '\n';
  } else if (train->parsed()) {
    const auto corpus = load_corpus(corpus_path, max_tokens);
    const auto model = train_classifier(corpus, nb_smoothing);
    save_model(model, out_path);
    std::cerr << "wrote model with " << model.vocabulary().size() << " tokens to " << out_path
              << '\n';
  } else if (mask->parsed()) {
    const auto config = mask_flags.resolve();
    const auto corpus = load_corpus(corpus_path, config.max_tokens);
    const auto in = prepare(corpus, config, table_path, model_path, bridge_command);
    const auto& domains = in.table->domains();
    std::vector<PipelineJob> jobs;
    if (all_pairs) {
      jobs = plan_jobs(corpus, TargetPolicy::all_pairs);
    } else if (cyclic) {
      jobs = plan_jobs(corpus, TargetPolicy::cyclic);
    } else {
      if (source.empty() || target.empty()) {
        throw ConfigError("mask: give --source and --target, or --all-pairs / --cyclic");
      }
      jobs = plan_jobs(corpus, TargetPolicy::fixed_pair, domains.at(source), domains.at(target));
    }
    const auto results = run_all(in, jobs, config, workers);
    std::vector<MaskedRecord> records;
    records.reserve(results.size());
    for (const auto& r : results) {
      records.push_back(to_record(r, domains));
      if (no_trace) records.back().trace.reset();
    }
    write_text(out_path, records_to_text(records));
  } else if (infill->parsed()) {
    const auto corpus = load_corpus(corpus_path, max_tokens);
    const auto table = load_table(table_path);
    const auto records = load_records(records_path);
    std::map<std::string, const Document*> by_id;
    for (const auto& doc : corpus.documents) by_id[doc.id] = &doc;
    std::map<DomainIndex, std::vector<std::string>> candidates;
    std::string text;
    for (const auto& rec : records) {
      auto it = by_id.find(rec.id);
      if (it == by_id.end()) throw InputError("record '" + rec.id + "' has no corpus document");
      const DomainIndex t = table.domains().at(rec.target);
      auto cand = candidates.find(t);
      if (cand == candidates.end()) {
        cand = candidates.emplace(t, infill_candidates(table, t, top_k)).first;
      }
      nlohmann::json line;
      line["id"] = rec.id;
      line["target"] = rec.target;
      line["text"] = naive_infill(it->second->tokens, rec.spans, rec.id, cand->second, infill_seed);
      text += line.dump() + '\n';
    }
    write_text(out_path, text);
  } else if (leak->parsed()) {
    const auto config = leak_flags.resolve();
    const auto corpus = load_corpus(corpus_path, config.max_tokens);
    corpus.require_multi_domain();
    std::vector<LeakageExample> examples;
    if (!records_path.empty()) {
      examples = leakage_examples(corpus, load_records(records_path), config.mask_sentinel);
    } else {
      const auto in = prepare(corpus, config, table_path, model_path, {});
      const auto results =
          run_all(in, plan_jobs(corpus, TargetPolicy::cyclic), config, workers);
      examples = leakage_examples(corpus, results);
    }
    const auto report =
        leakage_eval_mean(corpus.domains, examples, parse_sizes(sizes_text), config.seed, seeds);
    std::cout << format_leakage_report(report);
    if (!json_path.empty()) write_text(json_path, leakage_report_json(report) + '\n');
  } else if (mstats->parsed()) {
    auto records = load_records(records_path);
    if (!by_pair) {
      for (auto& rec : records) rec.source = rec.target = "all";
    }
    const auto report = mask_count_report(records);
    if (by_pair) {
      std::cout << format_mask_count_grid(report);
    } else if (const auto* cell = report.find("all", "all")) {
      std::cout << "documents " << cell->documents << '\n';
      const char* names[] = {"step1", "step2", "step3"};
      for (int s = 0; s < 3; ++s) {
        std::ostringstream v;
        v.setf(std::ios::fixed);
        v.precision(1);
        v << cell->average[s];
        std::cout << names[s] << ' ' << v.str() << '\n';
      }
    }
    if (!json_path.empty()) write_text(json_path, mask_count_json(report) + '\n');
  } else if (synth->parsed()) {
    write_text(out_path, synthetic_corpus_jsonl(spec));
  } else if (exportreq->parsed()) {
    const auto corpus = load_corpus(corpus_path, max_tokens);
    write_text(out_path, requests_jsonl(corpus_requests(corpus)));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const remask::ConfigError& e) {
    std::cerr << "remask: config error: " << e.what() << '\n';
    return 2;
  } catch (const remask::InputError& e) {
    std::cerr << "remask: input error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "remask: " << e.what() << '\n';
    return 1;
  }
}
