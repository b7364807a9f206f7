#include "remask/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "remask/error.hpp"

namespace remask {

SaliencyVector SaliencySource::scores_for(const Document& doc, const DomainScorer& scorer,
                                          DomainIndex source) const {
  if (!map_) return occlusion_saliency(doc, scorer, source);
  auto it = map_->find(doc.id);
  if (it == map_->end()) throw InputError("no external saliency for doc_id '" + doc.id + "'");
  return it->second;
}

std::size_t ObfuscationResult::token_count(const std::vector<MaskSpan>& spans) {
  std::size_t n = 0;
  for (const auto& s : spans) n += s.length;
  return n;
}

ObfuscationResult run_pipeline(const Document& doc, const AffinityTable& table,
                               const DomainScorer& scorer, const SaliencySource& saliency,
                               const PipelineConfig& config, DomainIndex source,
                               DomainIndex target) {
  if (source == target) throw ConfigError("source and target domains must differ");
  if (table.domains() != scorer.domains()) {
    throw InputError("affinity table and classifier disagree on the domain list");
  }
  if (source >= table.domains().size() || target >= table.domains().size()) {
    throw InputError("domain index out of range");
  }

  ObfuscationResult r;
  r.doc = &doc;
  r.source = source;
  r.target = target;

  MaskedDocument md = config.ablation == Ablation::no_init
                          ? MaskedDocument(doc, source, target)
                          : mask_step1(doc, table, source, target, config.tau1, config.ngram_orders);
  r.step1_spans = md.spans();

  if (config.ablation != Ablation::no_ott) {
    md = mask_step2(md, saliency.scores_for(doc, scorer, source), config.tau2);
  }
  r.step2_spans = md.spans();

  if (config.ablation != Ablation::no_unmask) {
    auto [unmasked, trace] =
        unmask_step3(md, scorer, source, config.tau3, config.unmask_strategy);
    md = std::move(unmasked);
    r.trace = std::move(trace);
  }
  r.step3_spans = md.spans();

  r.masked_step1 = render(doc.tokens, r.step1_spans, config.mask_sentinel, config.merge_consecutive);
  r.masked_step2 = render(doc.tokens, r.step2_spans, config.mask_sentinel, config.merge_consecutive);
  r.masked_step3 = render(doc.tokens, r.step3_spans, config.mask_sentinel, config.merge_consecutive);
  return r;
}

std::vector<PipelineJob> plan_jobs(const Corpus& corpus, TargetPolicy policy, DomainIndex source,
                                   DomainIndex target) {
  corpus.require_multi_domain();
  const std::size_t n = corpus.domains.size();
  std::vector<PipelineJob> jobs;
  if (policy == TargetPolicy::fixed_pair) {
    if (source == target) throw ConfigError("source and target domains must differ");
    if (source >= n || target >= n) throw InputError("domain index out of range");
  }
  for (const auto& doc : corpus.documents) {
    const DomainIndex d = corpus.domain_of(doc);
    switch (policy) {
      case TargetPolicy::fixed_pair:
        if (d == source) jobs.push_back({&doc, d, target});
        break;
      case TargetPolicy::all_pairs:
        for (DomainIndex t = 0; t < n; ++t) {
          if (t != d) jobs.push_back({&doc, d, t});
        }
        break;
      case TargetPolicy::cyclic:
        jobs.push_back({&doc, d, (d + 1) % n});
        break;
    }
  }
  return jobs;
}

std::vector<ObfuscationResult> run_jobs(const std::vector<PipelineJob>& jobs,
                                        const AffinityTable& table, const DomainScorer& scorer,
                                        const SaliencySource& saliency,
                                        const PipelineConfig& config, std::size_t workers) {
  config.validate();
  std::vector<ObfuscationResult> results(jobs.size());
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(jobs.size(), 1));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        const auto& job = jobs[i];
        results[i] = run_pipeline(*job.doc, table, scorer, saliency, config, job.source, job.target);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(jobs.size());
        return;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace remask
