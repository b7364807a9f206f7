#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "remask/affinity.hpp"
#include "remask/pipeline.hpp"

namespace remask {

inline constexpr std::size_t kInfillTopK = 20;

/// Unigram keys ranked by rho(., target) descending (ties by key), at most k.
/// Throws InputError when the table has no unigram entries.
std::vector<std::string> infill_candidates(const AffinityTable& table, DomainIndex target,
                                           std::size_t k = kInfillTopK);

/// Placeholder for a real counterfactual generator: every final mask span is
/// replaced by one unigram drawn from the target's top-k keys. The draw is
/// seeded by `seed` and the document id, so output does not depend on order.
std::string naive_infill(const ObfuscationResult& result, const AffinityTable& table,
                         DomainIndex target, std::uint64_t seed, std::size_t k = kInfillTopK);

std::string naive_infill(const std::vector<std::string>& tokens, const std::vector<MaskSpan>& spans,
                         std::string_view doc_id, const std::vector<std::string>& candidates,
                         std::uint64_t seed);

}  // namespace remask
