#pragma once

#include <cstddef>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "remask/classifier.hpp"
#include "remask/corpus.hpp"
#include "remask/saliency.hpp"

namespace remask {

// Client side of the transformer-scorer line protocol. One JSON object per
// line in each direction; responses come back in request order.

struct ScoreRequest {
  std::string id;
  std::string text;
  std::string source_domain;
};

struct ScoreResponse {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<double> saliency;
  std::vector<double> proba;
  std::vector<std::string> domains;
};

std::string request_to_json(const ScoreRequest& request);

/// Parses and validates one response line: saliency aligned with tokens and
/// non-negative, proba the same length as domains and summing to 1 +- 1e-6.
/// Error responses ({"id", "error"}) and violations throw InputError.
ScoreResponse parse_score_response(std::string_view line);

/// Reorders the response distribution into `domains` order.
std::vector<double> align_proba(const ScoreResponse& response, const DomainSet& domains);

/// Checks the response tokens against the corpus tokenization.
SaliencyVector response_to_saliency(const ScoreResponse& response, const Document& doc,
                                    SaliencyProvider provider = SaliencyProvider::external_attention_norm);

/// One request per document, text re-joined from its tokens so the bridge
/// sees the primary tokenization.
std::vector<ScoreRequest> corpus_requests(const Corpus& corpus);
std::string requests_jsonl(const std::vector<ScoreRequest>& requests);

/// A child process speaking the protocol over stdin/stdout.
class BridgeProcess {
 public:
  /// Throws InputError if the process cannot be started.
  explicit BridgeProcess(const std::vector<std::string>& command);
  ~BridgeProcess();
  BridgeProcess(const BridgeProcess&) = delete;
  BridgeProcess& operator=(const BridgeProcess&) = delete;

  /// Sends one line and blocks for one response line.
  std::string exchange(const std::string& line);

 private:
  std::string read_line();

  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

/// f_d backed by a bridge process. Calls are serialized: one request in
/// flight per process.
class BridgeScorer final : public DomainScorer {
 public:
  BridgeScorer(const std::vector<std::string>& command, DomainSet domains);

  const DomainSet& domains() const override { return domains_; }
  std::vector<double> predict_proba(const std::vector<std::string>& tokens) const override;

  /// Full response for arbitrary text, for saliency extraction.
  ScoreResponse score(const ScoreRequest& request) const;

 private:
  DomainSet domains_;
  mutable BridgeProcess process_;
  mutable std::mutex mutex_;
  mutable std::size_t next_id_ = 0;
};

}  // namespace remask
