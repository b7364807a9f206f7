#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "remask/classifier.hpp"
#include "remask/corpus.hpp"
#include "remask/masking.hpp"

namespace remask {

enum class SaliencyProvider { occlusion, external_attention_norm, external_attention_score };

std::string_view to_string(SaliencyProvider provider);
/// Throws InputError for unknown tags.
SaliencyProvider parse_saliency_provider(std::string_view text);

struct SaliencyVector {
  std::string doc_id;
  SaliencyProvider provider = SaliencyProvider::occlusion;
  std::vector<double> scores;  // parallel to Document::tokens
};

/// score(i) = f_d^source(tokens) - f_d^source(tokens without position i).
SaliencyVector occlusion_saliency(const Document& doc, const DomainScorer& scorer,
                                  DomainIndex source);

using SaliencyMap = std::map<std::string, SaliencyVector>;

/// Reads saliency interchange records (JSON lines with `doc_id`, `tokens`,
/// `scores`, `provider`) and validates each one against the corpus.
SaliencyMap load_external_saliency(const std::filesystem::path& path, const Corpus& corpus);
SaliencyMap parse_external_saliency(std::string_view contents, const Corpus& corpus);

std::string saliency_record_json(const SaliencyVector& sal,
                                 const std::vector<std::string>& tokens);

/// Step-2 threshold: an absolute score or a per-document quantile.
struct Tau2Policy {
  enum class Kind { absolute, quantile };
  Kind kind = Kind::quantile;
  double value = 0.8;

  static Tau2Policy absolute(double v) { return {Kind::absolute, v}; }
  static Tau2Policy quantile(double q) { return {Kind::quantile, q}; }
};

/// Linear-interpolation quantile (numpy's default) of `values`.
/// Throws std::invalid_argument when values is empty.
double quantile(std::vector<double> values, double q);

/// Adds a step2 unigram span at every unmasked position whose score exceeds
/// the resolved threshold. The quantile is taken over the scores of the
/// positions that are still unmasked.
MaskedDocument mask_step2(const MaskedDocument& md, const SaliencyVector& sal,
                          const Tau2Policy& policy);

}  // namespace remask
