#include "remask/unmask.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "remask/error.hpp"

namespace remask {

std::string_view to_string(UnmaskStrategy strategy) {
  switch (strategy) {
    case UnmaskStrategy::static_ascending:
      return "static";
    case UnmaskStrategy::greedy_recompute:
      return "greedy";
    case UnmaskStrategy::word_order:
      return "word-order";
  }
  return "static";
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::guard_violation:
      return "guard_violation";
    case StopReason::exhausted:
      return "exhausted";
    case StopReason::step2_already_above_guard:
      return "step2_already_above_guard";
  }
  return "exhausted";
}

UnmaskStrategy parse_unmask_strategy(std::string_view text) {
  if (text == "static" || text == "static_ascending") return UnmaskStrategy::static_ascending;
  if (text == "greedy" || text == "greedy_recompute") return UnmaskStrategy::greedy_recompute;
  if (text == "word-order" || text == "word_order") return UnmaskStrategy::word_order;
  throw ConfigError("unknown unmask strategy '" + std::string(text) + "'");
}

namespace {

MaskedDocument without_span(const MaskedDocument& md, std::size_t position) {
  MaskedDocument out = md;
  out.remove_span_at(position);
  return out;
}

bool by_gain_then_position(const CandidateGain& a, const CandidateGain& b) {
  return a.gain != b.gain ? a.gain < b.gain : a.position < b.position;
}

std::vector<CandidateGain> all_gains(const MaskedDocument& md, const DomainScorer& scorer,
                                     DomainIndex source) {
  const double base = scorer.confidence(md, source);
  std::vector<CandidateGain> gains;
  gains.reserve(md.spans().size());
  for (const auto& span : md.spans()) {
    gains.push_back(
        {span.start, scorer.confidence(without_span(md, span.start), source) - base});
  }
  return gains;
}

}  // namespace

double unmask_gain(const MaskedDocument& md, const DomainScorer& scorer, DomainIndex source,
                   std::size_t position) {
  if (!md.is_masked(position)) {
    throw std::invalid_argument("position " + std::to_string(position) + " is not masked");
  }
  return scorer.confidence(without_span(md, position), source) - scorer.confidence(md, source);
}

std::pair<MaskedDocument, UnmaskTrace> unmask_step3(const MaskedDocument& md,
                                                    const DomainScorer& scorer,
                                                    DomainIndex source, double tau3,
                                                    UnmaskStrategy strategy) {
  if (!(tau3 > 0.0 && tau3 < 1.0)) throw ConfigError("tau3 must lie in (0, 1)");
  UnmaskTrace trace;
  MaskedDocument current = md;
  double confidence = scorer.confidence(md, source);
  trace.initial_confidence = confidence;
  trace.final_confidence = confidence;
  if (md.spans().empty()) {
    trace.stop_reason = StopReason::exhausted;
    return {current, trace};
  }
  trace.candidate_gains = all_gains(md, scorer, source);

  std::vector<CandidateGain> queue = trace.candidate_gains;
  if (strategy == UnmaskStrategy::static_ascending) {
    std::sort(queue.begin(), queue.end(), by_gain_then_position);
  }  // word_order: spans are already sorted by start

  trace.stop_reason = StopReason::exhausted;
  std::size_t next = 0;
  while (!current.spans().empty()) {
    std::size_t position;
    if (strategy == UnmaskStrategy::greedy_recompute) {
      auto gains = trace.restored.empty() ? trace.candidate_gains
                                          : all_gains(current, scorer, source);
      position = std::min_element(gains.begin(), gains.end(), by_gain_then_position)->position;
    } else {
      if (next == queue.size()) break;
      position = queue[next++].position;
    }
    MaskedDocument trial = without_span(current, position);
    const double trial_confidence = scorer.confidence(trial, source);
    if (!(trial_confidence < tau3)) {
      trace.stop_reason = confidence < tau3 ? StopReason::guard_violation
                                            : StopReason::step2_already_above_guard;
      break;
    }
    current = std::move(trial);
    confidence = trial_confidence;
    trace.restored.push_back(position);
  }
  trace.final_confidence = confidence;
  return {std::move(current), std::move(trace)};
}

}  // namespace remask
