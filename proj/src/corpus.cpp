#include "remask/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "remask/error.hpp"
#include "remask/stemmer.hpp"
#include "remask/tokenizer.hpp"

namespace remask {

DomainSet::DomainSet(std::vector<std::string> labels) {
  for (auto& l : labels) {
    if (find(l)) throw InputError("duplicate domain label '" + l + "'");
    labels_.push_back(std::move(l));
  }
}

DomainIndex DomainSet::intern(std::string_view label) {
  if (auto i = find(label)) return *i;
  labels_.emplace_back(label);
  return labels_.size() - 1;
}

std::optional<DomainIndex> DomainSet::find(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

DomainIndex DomainSet::at(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw InputError("unknown domain '" + std::string(label) + "'");
}

namespace {

std::vector<std::string> stem_all(const std::vector<std::string>& tokens) {
  std::vector<std::string> stems;
  stems.reserve(tokens.size());
  for (const auto& t : tokens) stems.push_back(stem(t));
  return stems;
}

}  // namespace

Document make_document(std::string id, std::string domain, std::string_view text,
                       std::size_t max_tokens, std::optional<std::string> task_label) {
  auto tokens = tokenize(text);
  if (tokens.size() > max_tokens) tokens.resize(max_tokens);
  Document doc = make_document(std::move(id), std::move(domain), std::move(tokens));
  doc.task_label = std::move(task_label);
  return doc;
}

Document make_document(std::string id, std::string domain, std::vector<std::string> tokens) {
  Document doc;
  doc.id = std::move(id);
  doc.domain = std::move(domain);
  doc.stems = stem_all(tokens);
  doc.tokens = std::move(tokens);
  return doc;
}

void Corpus::require_multi_domain() const {
  if (domains.size() < 2) {
    throw InputError("corpus has " + std::to_string(domains.size()) +
                     " domain(s); at least 2 are required");
  }
}

void add_document(Corpus& corpus, Document doc) {
  if (doc.domain.empty()) throw InputError("document '" + doc.id + "' has an empty domain");
  corpus.domains.intern(doc.domain);
  corpus.documents.push_back(std::move(doc));
}

Corpus parse_corpus(std::string_view contents, std::size_t max_tokens) {
  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    std::size_t eol = contents.find('\n', pos);
    if (eol == std::string_view::npos) eol = contents.size();
    std::string_view line = contents.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (eol == contents.size()) break;
      continue;
    }
    const std::string where = "line " + std::to_string(line_no);
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw InputError(where + ": malformed record: " + e.what());
    }
    if (!rec.is_object()) throw InputError(where + ": record is not an object");
    auto field = [&](const char* name, bool required) -> std::optional<std::string> {
      auto it = rec.find(name);
      if (it == rec.end() || it->is_null()) {
        if (required) throw InputError(where + ": missing field '" + name + "'");
        return std::nullopt;
      }
      if (!it->is_string()) throw InputError(where + ": field '" + name + "' is not a string");
      return it->get<std::string>();
    };
    std::string id = *field("id", true);
    std::string domain = *field("domain", true);
    std::string text = *field("text", true);
    auto label = field("label", false);
    if (domain.empty()) throw InputError(where + ": empty domain");
    if (!seen_ids.insert(id).second) throw InputError(where + ": duplicate id '" + id + "'");
    add_document(corpus, make_document(std::move(id), std::move(domain), text, max_tokens,
                                       std::move(label)));
    if (eol == contents.size()) break;
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, std::size_t max_tokens) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open corpus file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str(), max_tokens);
}

std::string ngram_key(const Document& doc, std::size_t start, std::size_t order) {
  std::string key = doc.stems.at(start);
  for (std::size_t k = 1; k < order; ++k) {
    key.push_back(' ');
    key += doc.stems.at(start + k);
  }
  return key;
}

std::vector<NgramOccurrence> extract_ngrams(const Document& doc,
                                            const std::vector<std::size_t>& orders) {
  std::vector<NgramOccurrence> out;
  for (std::size_t n : orders) {
    if (n < 1 || n > 3) throw std::invalid_argument("n-gram order must be 1, 2 or 3");
    if (doc.size() < n) continue;
    for (std::size_t i = 0; i + n <= doc.size(); ++i) {
      out.push_back({i, n, ngram_key(doc, i, n)});
    }
  }
  return out;
}

}  // namespace remask
