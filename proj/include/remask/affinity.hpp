#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "remask/corpus.hpp"
#include "remask/masking.hpp"

namespace remask {

struct AffinityConfig {
  /// Additive smoothing for uni-, bi- and trigrams.
  std::array<double, 3> smoothing{1.0, 5.0, 7.0};
  /// Minimum number of documents (over all domains) a key must occur in.
  std::size_t min_doc_freq = 10;
  std::vector<std::size_t> orders{1, 2, 3};

  void validate() const;
};

struct AffinityEntry {
  std::size_t order = 1;
  std::vector<std::uint32_t> doc_counts;  // c(w, D), one per domain
  std::vector<double> prob;               // smoothed P(D | w)
  std::vector<double> rho;                // affinity rho(w, D)
  double entropy = 0.0;                   // H(D | w), natural log

  std::uint64_t total_docs() const;
};

/// P(D|w) = (c + a) / (sum c + a N); H in nats; rho = P (1 - H / ln N).
AffinityEntry affinity_from_counts(std::vector<std::uint32_t> counts, double alpha,
                                   std::size_t order = 1);

class AffinityTable {
 public:
  AffinityTable(DomainSet domains, AffinityConfig config);

  const DomainSet& domains() const { return domains_; }
  const AffinityConfig& config() const { return config_; }
  std::size_t size() const { return entries_.size(); }

  const AffinityEntry* find(std::string_view key) const;
  void insert(std::string key, AffinityEntry entry);

  /// Keys in (order, key) order; the export order.
  std::vector<std::string> sorted_keys() const;
  const std::unordered_map<std::string, AffinityEntry>& entries() const {
    return entries_;
  }

 private:
  DomainSet domains_;
  AffinityConfig config_;
  std::unordered_map<std::string, AffinityEntry> entries_;
};

/// Document-level counts over all n-gram keys; keys below min_doc_freq are
/// dropped. Throws InputError for fewer than two domains.
AffinityTable build_table(const Corpus& corpus, const AffinityConfig& config = {});

/// m_a = rho(w, source) - rho(w, target). Absent keys score 0.
/// Throws ConfigError when source == target.
double transfer_score(const AffinityTable& table, std::string_view key,
                      DomainIndex source, DomainIndex target);

/// Heuristic masking: unigrams first, then bigrams and trigrams that overlap
/// no existing mask. A key is masked when m_a > tau1.
MaskedDocument mask_step1(const Document& doc, const AffinityTable& table,
                          DomainIndex source, DomainIndex target, double tau1,
                          const std::vector<std::size_t>& orders = {1, 2, 3});

void save_table(const AffinityTable& table, const std::filesystem::path& path);
AffinityTable load_table(const std::filesystem::path& path);
std::string table_to_json(const AffinityTable& table);
AffinityTable table_from_json(std::string_view json);

}  // namespace remask
