#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace remask {

inline constexpr std::size_t kDefaultMaxTokens = 96;

using DomainIndex = std::size_t;

/// Ordered set of domain labels. Index order is first-seen order.
class DomainSet {
 public:
  DomainSet() = default;
  explicit DomainSet(std::vector<std::string> labels);

  /// Returns the index of `label`, inserting it if new.
  DomainIndex intern(std::string_view label);
  std::optional<DomainIndex> find(std::string_view label) const;
  /// Throws InputError naming the label when it is unknown.
  DomainIndex at(std::string_view label) const;

  const std::string& label(DomainIndex i) const { return labels_.at(i); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

  bool operator==(const DomainSet&) const = default;

 private:
  std::vector<std::string> labels_;
};

struct Document {
  std::string id;
  std::string domain;
  std::vector<std::string> tokens;
  std::vector<std::string> stems;  // parallel to tokens
  std::optional<std::string> task_label;

  std::size_t size() const { return tokens.size(); }
};

/// Tokenizes, stems and truncates `text` into a Document.
Document make_document(std::string id, std::string domain, std::string_view text,
                       std::size_t max_tokens = kDefaultMaxTokens,
                       std::optional<std::string> task_label = std::nullopt);

/// Builds a Document from pre-split tokens (no truncation, stems computed).
Document make_document(std::string id, std::string domain,
                       std::vector<std::string> tokens);

struct Corpus {
  std::vector<Document> documents;
  DomainSet domains;

  /// Throws InputError when fewer than two domains are present.
  void require_multi_domain() const;
  DomainIndex domain_of(const Document& doc) const { return domains.at(doc.domain); }
};

/// Appends a document, registering its domain.
void add_document(Corpus& corpus, Document doc);

/// Reads a JSON-lines corpus: one object per line with string fields `id`,
/// `domain`, `text` and an optional `label`. Blank lines are skipped.
Corpus load_corpus(const std::filesystem::path& path,
                   std::size_t max_tokens = kDefaultMaxTokens);
Corpus parse_corpus(std::string_view contents,
                    std::size_t max_tokens = kDefaultMaxTokens);

struct NgramOccurrence {
  std::size_t position;
  std::size_t order;
  std::string key;  // space-joined stems

  bool operator==(const NgramOccurrence&) const = default;
};

/// All n-grams of the requested orders (each in {1,2,3}), grouped by order in
/// the order given, positions ascending within each group.
std::vector<NgramOccurrence> extract_ngrams(const Document& doc,
                                            const std::vector<std::size_t>& orders);

/// Space-joined stems of doc positions [start, start + order).
std::string ngram_key(const Document& doc, std::size_t start, std::size_t order);

}  // namespace remask
