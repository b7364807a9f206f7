#include "remask/infill.hpp"

#include <algorithm>
#include <random>

#include "remask/error.hpp"

namespace remask {
namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::vector<std::string> infill_candidates(const AffinityTable& table, DomainIndex target,
                                           std::size_t k) {
  if (target >= table.domains().size()) throw InputError("target domain out of range");
  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& [key, e] : table.entries()) {
    if (e.order == 1) ranked.emplace_back(e.rho[target], key);
  }
  if (ranked.empty()) {
    throw InputError("affinity table has no unigram entries for domain '" +
                     table.domains().label(target) + "'");
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(ranked[i].second);
  return out;
}

std::string naive_infill(const std::vector<std::string>& tokens, const std::vector<MaskSpan>& spans,
                         std::string_view doc_id, const std::vector<std::string>& candidates,
                         std::uint64_t seed) {
  if (candidates.empty()) throw InputError("no infill candidates");
  std::mt19937_64 rng(seed ^ fnv1a(doc_id));
  std::vector<std::string> out;
  std::size_t i = 0;
  for (const auto& span : spans) {
    for (; i < span.start; ++i) out.push_back(tokens[i]);
    out.push_back(candidates[rng() % candidates.size()]);
    i = span.end();
  }
  for (; i < tokens.size(); ++i) out.push_back(tokens[i]);
  std::string text;
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (j) text.push_back(' ');
    text += out[j];
  }
  return text;
}

std::string naive_infill(const ObfuscationResult& result, const AffinityTable& table,
                         DomainIndex target, std::uint64_t seed, std::size_t k) {
  const auto candidates = infill_candidates(table, target, k);
  return naive_infill(result.doc->tokens, result.step3_spans, result.doc->id, candidates, seed);
}

}  // namespace remask
