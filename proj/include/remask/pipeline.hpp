#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "remask/affinity.hpp"
#include "remask/classifier.hpp"
#include "remask/config.hpp"
#include "remask/saliency.hpp"
#include "remask/unmask.hpp"

namespace remask {

/// Where Step-2 scores come from: computed by occlusion against the scorer, or
/// looked up by document id in a preloaded external map.
class SaliencySource {
 public:
  static SaliencySource occlusion() { return SaliencySource(nullptr); }
  static SaliencySource external(const SaliencyMap& map) { return SaliencySource(&map); }

  /// Throws InputError when an external map has no record for the document.
  SaliencyVector scores_for(const Document& doc, const DomainScorer& scorer,
                            DomainIndex source) const;
  bool is_external() const { return map_ != nullptr; }

 private:
  explicit SaliencySource(const SaliencyMap* map) : map_(map) {}
  const SaliencyMap* map_;
};

struct ObfuscationResult {
  const Document* doc = nullptr;
  DomainIndex source = 0;
  DomainIndex target = 0;
  std::vector<MaskSpan> step1_spans;
  std::vector<MaskSpan> step2_spans;
  std::vector<MaskSpan> step3_spans;
  std::string masked_step1;
  std::string masked_step2;
  std::string masked_step3;
  std::optional<UnmaskTrace> trace;  // empty when Step 3 is ablated

  static std::size_t token_count(const std::vector<MaskSpan>& spans);
};

/// Step1 -> Step2 -> Step3 for one document, honoring the config's ablation.
ObfuscationResult run_pipeline(const Document& doc, const AffinityTable& table,
                               const DomainScorer& scorer, const SaliencySource& saliency,
                               const PipelineConfig& config, DomainIndex source,
                               DomainIndex target);

struct PipelineJob {
  const Document* doc;
  DomainIndex source;
  DomainIndex target;
};

enum class TargetPolicy { fixed_pair, all_pairs, cyclic };

/// Enumerates jobs in corpus order. fixed_pair keeps documents of `source`
/// only; all_pairs emits one job per other domain; cyclic sends each document
/// to the next domain in domain order.
std::vector<PipelineJob> plan_jobs(const Corpus& corpus, TargetPolicy policy,
                                   DomainIndex source = 0, DomainIndex target = 0);

/// Runs jobs on `workers` threads. Results are in job order.
std::vector<ObfuscationResult> run_jobs(const std::vector<PipelineJob>& jobs,
                                        const AffinityTable& table,
                                        const DomainScorer& scorer,
                                        const SaliencySource& saliency,
                                        const PipelineConfig& config,
                                        std::size_t workers = 1);

}  // namespace remask
