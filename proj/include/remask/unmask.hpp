#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "remask/classifier.hpp"
#include "remask/masking.hpp"

namespace remask {

enum class UnmaskStrategy { static_ascending, greedy_recompute, word_order };
enum class StopReason { guard_violation, exhausted, step2_already_above_guard };

std::string_view to_string(UnmaskStrategy strategy);
std::string_view to_string(StopReason reason);
/// Accepts "static", "greedy", "word-order" and the enum spellings.
UnmaskStrategy parse_unmask_strategy(std::string_view text);

struct CandidateGain {
  std::size_t position;  // start of the span
  double gain;
};

struct UnmaskTrace {
  std::vector<CandidateGain> candidate_gains;  // gains on the input document
  std::vector<std::size_t> restored;           // span starts, commit order
  StopReason stop_reason = StopReason::exhausted;
  double initial_confidence = 0.0;
  double final_confidence = 0.0;
};

/// m_u: f_d^source(md with the span covering `position` restored) - f_d^source(md).
/// Throws std::invalid_argument if `position` is not masked.
double unmask_gain(const MaskedDocument& md, const DomainScorer& scorer,
                   DomainIndex source, std::size_t position);

/// Greedy restoration of masked spans. A restoration is committed only while
/// the restored text keeps f_d^source < tau3; the first candidate that would
/// reach tau3 is rolled back and iteration stops.
std::pair<MaskedDocument, UnmaskTrace> unmask_step3(
    const MaskedDocument& md, const DomainScorer& scorer, DomainIndex source,
    double tau3, UnmaskStrategy strategy = UnmaskStrategy::static_ascending);

}  // namespace remask
