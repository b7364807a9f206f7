#include "remask/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "remask/error.hpp"

namespace remask {

std::string_view to_string(SaliencyProvider provider) {
  switch (provider) {
    case SaliencyProvider::occlusion:
      return "occlusion";
    case SaliencyProvider::external_attention_norm:
      return "external_attention_norm";
    case SaliencyProvider::external_attention_score:
      return "external_attention_score";
  }
  return "occlusion";
}

SaliencyProvider parse_saliency_provider(std::string_view text) {
  if (text == "occlusion") return SaliencyProvider::occlusion;
  if (text == "external_attention_norm" || text == "attention_norm") {
    return SaliencyProvider::external_attention_norm;
  }
  if (text == "external_attention_score" || text == "attention_score") {
    return SaliencyProvider::external_attention_score;
  }
  throw InputError("unknown saliency provider '" + std::string(text) + "'");
}

SaliencyVector occlusion_saliency(const Document& doc, const DomainScorer& scorer,
                                  DomainIndex source) {
  SaliencyVector sal;
  sal.doc_id = doc.id;
  sal.provider = SaliencyProvider::occlusion;
  sal.scores.resize(doc.size());
  const double full = scorer.domain_probability(doc.tokens, source);
  std::vector<std::string> occluded;
  occluded.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    occluded.assign(doc.tokens.begin(), doc.tokens.end());
    occluded.erase(occluded.begin() + static_cast<std::ptrdiff_t>(i));
    sal.scores[i] = full - scorer.domain_probability(occluded, source);
  }
  return sal;
}

SaliencyMap parse_external_saliency(std::string_view contents, const Corpus& corpus) {
  std::unordered_map<std::string, const Document*> by_id;
  for (const auto& doc : corpus.documents) by_id.emplace(doc.id, &doc);

  SaliencyMap out;
  std::istringstream in{std::string(contents)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "saliency line " + std::to_string(line_no);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(where + ": malformed record: " + e.what());
    }
    SaliencyVector sal;
    std::vector<std::string> tokens;
    try {
      sal.doc_id = rec.at("doc_id").get<std::string>();
      tokens = rec.at("tokens").get<std::vector<std::string>>();
      sal.scores = rec.at("scores").get<std::vector<double>>();
      sal.provider = parse_saliency_provider(rec.at("provider").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw InputError(where + ": " + e.what());
    }
    auto it = by_id.find(sal.doc_id);
    if (it == by_id.end()) throw InputError(where + ": unknown doc_id '" + sal.doc_id + "'");
    const Document& doc = *it->second;
    if (sal.scores.size() != doc.size()) {
      throw InputError("doc_id '" + sal.doc_id + "': " + std::to_string(sal.scores.size()) +
                       " scores for " + std::to_string(doc.size()) + " tokens");
    }
    if (tokens != doc.tokens) {
      throw InputError("doc_id '" + sal.doc_id + "': tokens do not match the corpus tokenization");
    }
    for (double s : sal.scores) {
      if (!std::isfinite(s)) throw InputError("doc_id '" + sal.doc_id + "': non-finite score");
      if (sal.provider == SaliencyProvider::external_attention_norm && s < 0.0) {
        throw InputError("doc_id '" + sal.doc_id + "': negative attention norm");
      }
    }
    std::string id = sal.doc_id;
    if (!out.emplace(std::move(id), std::move(sal)).second) {
      throw InputError(where + ": duplicate doc_id");
    }
  }
  return out;
}

SaliencyMap load_external_saliency(const std::filesystem::path& path, const Corpus& corpus) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open saliency file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_external_saliency(buf.str(), corpus);
}

std::string saliency_record_json(const SaliencyVector& sal, const std::vector<std::string>& tokens) {
  nlohmann::json j;
  j["doc_id"] = sal.doc_id;
  j["tokens"] = tokens;
  j["scores"] = sal.scores;
  j["provider"] = std::string(to_string(sal.provider));
  return j.dump();
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

MaskedDocument mask_step2(const MaskedDocument& md, const SaliencyVector& sal,
                          const Tau2Policy& policy) {
  const Document& doc = md.doc();
  if (sal.scores.size() != doc.size()) {
    throw InputError("saliency for '" + doc.id + "' is not aligned with its tokens");
  }
  MaskedDocument out = md;
  const auto flags = md.mask_flags();
  double threshold = policy.value;
  if (policy.kind == Tau2Policy::Kind::quantile) {
    std::vector<double> open;
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (!flags[i]) open.push_back(sal.scores[i]);
    }
    if (open.empty()) return out;
    threshold = quantile(std::move(open), policy.value);
  }
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!flags[i] && sal.scores[i] > threshold) {
      out.add({i, 1, MaskStep::step2, sal.scores[i]});
    }
  }
  return out;
}

}  // namespace remask
