#include "remask/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "remask/error.hpp"

namespace remask {
namespace {

// Cumulative Zipf weights over `n` ranks, optionally reweighted per rank.
std::vector<double> cumulative(std::size_t n, double exponent,
                               const std::vector<double>* extra = nullptr) {
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double w = 1.0 / std::pow(static_cast<double>(i + 1), exponent);
    if (extra) w *= (*extra)[i];
    acc += w;
    cdf[i] = acc;
  }
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, std::mt19937_64& rng) {
  const double u = (static_cast<double>(rng() >> 11) * 0x1.0p-53) * cdf.back();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<std::size_t>(it - cdf.begin());
}

std::size_t uniform(std::size_t lo, std::size_t hi, std::mt19937_64& rng) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

struct Generated {
  std::string id;
  std::string domain;
  std::vector<std::string> tokens;
};

std::vector<Generated> generate(const SyntheticCorpusSpec& spec) {
  if (spec.domains < 2) throw ConfigError("synthetic corpus needs at least 2 domains");
  if (spec.min_length == 0 || spec.min_length > spec.max_length) {
    throw ConfigError("synthetic corpus length range is empty");
  }
  if (spec.max_planted > spec.min_length || spec.min_planted > spec.max_planted) {
    throw ConfigError("synthetic corpus planted range is invalid");
  }
  std::mt19937_64 rng(spec.seed);
  const auto planted_cdf = cumulative(spec.planted_per_domain, spec.planted_zipf);
  std::vector<std::vector<double>> background_cdf;
  for (std::size_t d = 0; d < spec.domains; ++d) {
    std::vector<double> skew(spec.background_vocabulary, 1.0);
    for (std::size_t j = 0; j < spec.background_vocabulary; ++j) {
      if (j % spec.domains == d) skew[j] = spec.background_skew;
    }
    background_cdf.push_back(cumulative(spec.background_vocabulary, spec.background_zipf, &skew));
  }

  std::vector<Generated> docs;
  docs.reserve(spec.documents);
  for (std::size_t i = 0; i < spec.documents; ++i) {
    const std::size_t d = i % spec.domains;
    const std::size_t length = uniform(spec.min_length, spec.max_length, rng);
    const std::size_t planted = uniform(spec.min_planted, spec.max_planted, rng);
    Generated g;
    g.id = "syn-" + std::to_string(i);
    g.domain = "dom" + std::to_string(d);
    g.tokens.reserve(length);
    for (std::size_t k = 0; k < length - planted; ++k) {
      g.tokens.push_back("w" + std::to_string(draw(background_cdf[d], rng)));
    }
    for (std::size_t k = 0; k < planted; ++k) {
      const std::size_t at = uniform(0, g.tokens.size(), rng);
      g.tokens.insert(g.tokens.begin() + static_cast<std::ptrdiff_t>(at),
                      planted_token(d, draw(planted_cdf, rng)));
    }
    docs.push_back(std::move(g));
  }
  return docs;
}

}  // namespace

std::string planted_token(std::size_t domain, std::size_t index) {
  return "d" + std::to_string(domain) + "p" + std::to_string(index);
}

Corpus synthetic_corpus(const SyntheticCorpusSpec& spec) {
  Corpus corpus;
  for (auto& g : generate(spec)) {
    add_document(corpus, make_document(std::move(g.id), std::move(g.domain), std::move(g.tokens)));
  }
  return corpus;
}

std::string synthetic_corpus_jsonl(const SyntheticCorpusSpec& spec) {
  std::string out;
  for (const auto& g : generate(spec)) {
    std::string text;
    for (std::size_t k = 0; k < g.tokens.size(); ++k) {
      if (k) text.push_back(' ');
      text += g.tokens[k];
    }
    out += nlohmann::json{{"id", g.id}, {"domain", g.domain}, {"text", text}}.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace remask
