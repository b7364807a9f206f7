#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "remask/corpus.hpp"
#include "remask/masking.hpp"

namespace remask {

/// f_d: a probability distribution over domains for a token sequence.
/// Implementations must be safe to call concurrently.
class DomainScorer {
 public:
  virtual ~DomainScorer() = default;
  virtual const DomainSet& domains() const = 0;
  virtual std::vector<double> predict_proba(const std::vector<std::string>& tokens) const = 0;

  double domain_probability(const std::vector<std::string>& tokens,
                            DomainIndex domain) const {
    return predict_proba(tokens).at(domain);
  }
  /// f_d^source of the document's currently visible tokens.
  double confidence(const MaskedDocument& md, DomainIndex source) const {
    return domain_probability(md.visible_tokens(), source);
  }
};

/// Multinomial bag-of-words model with additive likelihood smoothing.
class NaiveBayesModel final : public DomainScorer {
 public:
  NaiveBayesModel(DomainSet domains, std::vector<double> priors, double smoothing,
                  std::vector<std::string> vocabulary,
                  std::vector<std::vector<double>> token_loglik);

  const DomainSet& domains() const override { return domains_; }
  /// Mask sentinels and out-of-vocabulary tokens are skipped. Evidence is
  /// summed per vocabulary id in id order, so the result only depends on the
  /// token multiset.
  std::vector<double> predict_proba(const std::vector<std::string>& tokens) const override;

  const std::vector<double>& priors() const { return priors_; }
  double smoothing() const { return smoothing_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  /// token_loglik()[vocab id][domain]
  const std::vector<std::vector<double>>& token_loglik() const { return token_loglik_; }
  bool in_vocabulary(std::string_view token) const;

  std::string_view mask_token() const { return mask_token_; }
  void set_mask_token(std::string token) { mask_token_ = std::move(token); }

  bool operator==(const NaiveBayesModel& other) const;

 private:
  DomainSet domains_;
  std::vector<double> priors_;
  double smoothing_;
  std::vector<std::string> vocabulary_;
  std::vector<std::vector<double>> token_loglik_;
  std::unordered_map<std::string, std::size_t> index_;
  std::string mask_token_{kDefaultMaskSentinel};
};

struct LabeledTokens {
  const std::vector<std::string>* tokens;
  DomainIndex domain;
};

/// Trains on surface tokens. Throws InputError if a domain has no documents.
NaiveBayesModel train_classifier(const Corpus& corpus, double smoothing = 1.0);
NaiveBayesModel train_classifier(const DomainSet& domains,
                                 const std::vector<LabeledTokens>& examples,
                                 double smoothing = 1.0,
                                 std::string_view skip_token = kDefaultMaskSentinel);

std::string model_to_json(const NaiveBayesModel& model);
NaiveBayesModel model_from_json(std::string_view json);
void save_model(const NaiveBayesModel& model, const std::filesystem::path& path);
NaiveBayesModel load_model(const std::filesystem::path& path);

}  // namespace remask
