#include "remask/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "remask/error.hpp"

namespace remask {

NaiveBayesModel::NaiveBayesModel(DomainSet domains, std::vector<double> priors, double smoothing,
                                 std::vector<std::string> vocabulary,
                                 std::vector<std::vector<double>> token_loglik)
    : domains_(std::move(domains)),
      priors_(std::move(priors)),
      smoothing_(smoothing),
      vocabulary_(std::move(vocabulary)),
      token_loglik_(std::move(token_loglik)) {
  if (priors_.size() != domains_.size()) throw InputError("priors do not match domain count");
  if (token_loglik_.size() != vocabulary_.size()) {
    throw InputError("log-likelihood table does not match vocabulary size");
  }
  for (const auto& row : token_loglik_) {
    if (row.size() != domains_.size()) throw InputError("log-likelihood row size mismatch");
  }
  index_.reserve(vocabulary_.size());
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!index_.emplace(vocabulary_[i], i).second) {
      throw InputError("duplicate vocabulary token '" + vocabulary_[i] + "'");
    }
  }
}

bool NaiveBayesModel::in_vocabulary(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

std::vector<double> NaiveBayesModel::predict_proba(const std::vector<std::string>& tokens) const {
  std::vector<std::size_t> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (t == mask_token_) continue;
    auto it = index_.find(t);
    if (it != index_.end()) ids.push_back(it->second);
  }
  std::sort(ids.begin(), ids.end());

  const std::size_t n = domains_.size();
  std::vector<double> logpost(n);
  for (std::size_t d = 0; d < n; ++d) logpost[d] = std::log(priors_[d]);
  for (std::size_t id : ids) {
    const auto& row = token_loglik_[id];
    for (std::size_t d = 0; d < n; ++d) logpost[d] += row[d];
  }
  const double top = *std::max_element(logpost.begin(), logpost.end());
  double z = 0.0;
  for (auto& v : logpost) {
    v = std::exp(v - top);
    z += v;
  }
  for (auto& v : logpost) v /= z;
  return logpost;
}

bool NaiveBayesModel::operator==(const NaiveBayesModel& other) const {
  return domains_ == other.domains_ && priors_ == other.priors_ &&
         smoothing_ == other.smoothing_ && vocabulary_ == other.vocabulary_ &&
         token_loglik_ == other.token_loglik_ && mask_token_ == other.mask_token_;
}

NaiveBayesModel train_classifier(const DomainSet& domains,
                                 const std::vector<LabeledTokens>& examples, double smoothing,
                                 std::string_view skip_token) {
  if (!(smoothing > 0.0) || !std::isfinite(smoothing)) {
    throw ConfigError("classifier smoothing must be > 0");
  }
  const std::size_t n = domains.size();
  if (n < 2) throw InputError("classifier needs at least 2 domains");
  std::vector<std::size_t> doc_counts(n, 0);
  std::vector<double> token_totals(n, 0.0);
  std::map<std::string, std::vector<std::uint64_t>> counts;
  for (const auto& ex : examples) {
    if (ex.domain >= n) throw InputError("example domain out of range");
    ++doc_counts[ex.domain];
    for (const auto& t : *ex.tokens) {
      if (t == skip_token) continue;
      auto [it, inserted] = counts.try_emplace(t);
      if (inserted) it->second.assign(n, 0);
      ++it->second[ex.domain];
      token_totals[ex.domain] += 1.0;
    }
  }
  for (std::size_t d = 0; d < n; ++d) {
    if (doc_counts[d] == 0) throw InputError("domain '" + domains.label(d) + "' has no documents");
  }

  std::vector<double> priors(n);
  for (std::size_t d = 0; d < n; ++d) {
    priors[d] = static_cast<double>(doc_counts[d]) / static_cast<double>(examples.size());
  }
  const double vocab_size = static_cast<double>(counts.size());
  std::vector<std::string> vocabulary;
  std::vector<std::vector<double>> loglik;
  vocabulary.reserve(counts.size());
  loglik.reserve(counts.size());
  for (const auto& [token, per_domain] : counts) {
    vocabulary.push_back(token);
    std::vector<double> row(n);
    for (std::size_t d = 0; d < n; ++d) {
      row[d] = std::log((per_domain[d] + smoothing) / (token_totals[d] + smoothing * vocab_size));
    }
    loglik.push_back(std::move(row));
  }
  NaiveBayesModel model(domains, std::move(priors), smoothing, std::move(vocabulary),
                        std::move(loglik));
  model.set_mask_token(std::string(skip_token));
  return model;
}

NaiveBayesModel train_classifier(const Corpus& corpus, double smoothing) {
  corpus.require_multi_domain();
  std::vector<LabeledTokens> examples;
  examples.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    examples.push_back({&doc.tokens, corpus.domain_of(doc)});
  }
  return train_classifier(corpus.domains, examples, smoothing);
}

std::string model_to_json(const NaiveBayesModel& model) {
  nlohmann::json j;
  j["format"] = "remask-nb-model";
  j["version"] = 1;
  j["domains"] = model.domains().labels();
  j["priors"] = model.priors();
  j["smoothing"] = model.smoothing();
  j["mask_token"] = std::string(model.mask_token());
  j["vocabulary"] = model.vocabulary();
  j["token_loglik"] = model.token_loglik();
  return j.dump();
}

NaiveBayesModel model_from_json(std::string_view text) {
  using nlohmann::json;
  try {
    json j = json::parse(text);
    if (j.at("format") != "remask-nb-model") throw InputError("not a classifier model file");
    NaiveBayesModel model(DomainSet(j.at("domains").get<std::vector<std::string>>()),
                          j.at("priors").get<std::vector<double>>(),
                          j.at("smoothing").get<double>(),
                          j.at("vocabulary").get<std::vector<std::string>>(),
                          j.at("token_loglik").get<std::vector<std::vector<double>>>());
    model.set_mask_token(j.value("mask_token", std::string(kDefaultMaskSentinel)));
    return model;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed classifier model: ") + e.what());
  }
}

void save_model(const NaiveBayesModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << model_to_json(model) << '\n';
}

NaiveBayesModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open classifier model " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace remask
