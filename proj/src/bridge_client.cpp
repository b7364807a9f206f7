#include "remask/bridge_client.hpp"

#include <cerrno>
#include <cmath>
#include <csignal>
#include <cstring>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "remask/error.hpp"
#include "remask/tokenizer.hpp"

namespace remask {

std::string request_to_json(const ScoreRequest& r) {
  return nlohmann::json{{"id", r.id}, {"text", r.text}, {"source_domain", r.source_domain}}.dump();
}

ScoreResponse parse_score_response(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed bridge response: ") + e.what());
  }
  ScoreResponse r;
  try {
    r.id = j.at("id").get<std::string>();
    if (auto it = j.find("error"); it != j.end() && !it->is_null()) {
      throw InputError("bridge error for request '" + r.id + "': " + it->dump());
    }
    r.tokens = j.at("tokens").get<std::vector<std::string>>();
    r.saliency = j.at("saliency").get<std::vector<double>>();
    r.proba = j.at("proba").get<std::vector<double>>();
    r.domains = j.at("domains").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed bridge response: ") + e.what());
  }
  const std::string where = "bridge response '" + r.id + "': ";
  if (r.saliency.size() != r.tokens.size()) throw InputError(where + "saliency/token length mismatch");
  for (double s : r.saliency) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw InputError(where + "saliency must be finite and >= 0");
  }
  if (r.proba.size() != r.domains.size() || r.proba.empty()) {
    throw InputError(where + "proba does not match domains");
  }
  double total = 0.0;
  for (double p : r.proba) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw InputError(where + "invalid probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6) throw InputError(where + "proba does not sum to 1");
  return r;
}

std::vector<double> align_proba(const ScoreResponse& response, const DomainSet& domains) {
  if (response.domains.size() != domains.size()) {
    throw InputError("bridge reports " + std::to_string(response.domains.size()) +
                     " domains, expected " + std::to_string(domains.size()));
  }
  std::vector<double> out(domains.size(), 0.0);
  std::vector<bool> seen(domains.size(), false);
  for (std::size_t i = 0; i < response.domains.size(); ++i) {
    const DomainIndex d = domains.at(response.domains[i]);
    if (seen[d]) throw InputError("bridge repeats domain '" + response.domains[i] + "'");
    seen[d] = true;
    out[d] = response.proba[i];
  }
  return out;
}

SaliencyVector response_to_saliency(const ScoreResponse& response, const Document& doc,
                                    SaliencyProvider provider) {
  if (response.tokens != doc.tokens) {
    throw InputError("doc_id '" + doc.id + "': bridge tokens do not match the corpus tokenization");
  }
  return {doc.id, provider, response.saliency};
}

std::vector<ScoreRequest> corpus_requests(const Corpus& corpus) {
  std::vector<ScoreRequest> out;
  out.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) out.push_back({doc.id, join_tokens(doc.tokens), doc.domain});
  return out;
}

std::string requests_jsonl(const std::vector<ScoreRequest>& requests) {
  std::string out;
  for (const auto& r : requests) {
    out += request_to_json(r);
    out.push_back('\n');
  }
  return out;
}

BridgeProcess::BridgeProcess(const std::vector<std::string>& command) {
  if (command.empty()) throw InputError("empty bridge command");
  int in_pipe[2];
  int out_pipe[2];
  if (pipe(in_pipe) != 0) throw InputError(std::string("pipe: ") + std::strerror(errno));
  if (pipe(out_pipe) != 0) {
    close(in_pipe[0]);
    close(in_pipe[1]);
    throw InputError(std::string("pipe: ") + std::strerror(errno));
  }
  std::vector<char*> argv;
  for (const auto& a : command) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  pid_ = fork();
  if (pid_ < 0) throw InputError(std::string("fork: ") + std::strerror(errno));
  if (pid_ == 0) {
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execvp(argv[0], argv.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  fcntl(to_child_, F_SETFD, FD_CLOEXEC);
  fcntl(from_child_, F_SETFD, FD_CLOEXEC);
}

BridgeProcess::~BridgeProcess() {
  if (to_child_ >= 0) close(to_child_);
  if (from_child_ >= 0) close(from_child_);
  if (pid_ > 0) {
    int status = 0;
    waitpid(pid_, &status, 0);
  }
}

std::string BridgeProcess::read_line() {
  for (;;) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    const ssize_t n = read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw InputError("bridge process closed its output");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string BridgeProcess::exchange(const std::string& line) {
  std::string payload = line + "\n";
  std::size_t sent = 0;
  while (sent < payload.size()) {
    const ssize_t n = write(to_child_, payload.data() + sent, payload.size() - sent);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw InputError("bridge process closed its input");
    sent += static_cast<std::size_t>(n);
  }
  return read_line();
}

namespace {
struct IgnoreSigpipe {
  IgnoreSigpipe() { std::signal(SIGPIPE, SIG_IGN); }
};
}  // namespace

BridgeScorer::BridgeScorer(const std::vector<std::string>& command, DomainSet domains)
    : domains_(std::move(domains)), process_((static_cast<void>(IgnoreSigpipe{}), command)) {}

ScoreResponse BridgeScorer::score(const ScoreRequest& request) const {
  std::lock_guard lock(mutex_);
  auto response = parse_score_response(process_.exchange(request_to_json(request)));
  if (response.id != request.id) {
    throw InputError("bridge answered '" + response.id + "' to request '" + request.id + "'");
  }
  return response;
}

std::vector<double> BridgeScorer::predict_proba(const std::vector<std::string>& tokens) const {
  std::string id;
  {
    std::lock_guard lock(mutex_);
    id = "q" + std::to_string(next_id_++);
  }
  return align_proba(score({id, join_tokens(tokens), ""}), domains_);
}

}  // namespace remask
