#include "remask/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "remask/error.hpp"

namespace remask {

void AffinityConfig::validate() const {
  for (double a : smoothing) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ConfigError("smoothing constants must be >= 0");
  }
  if (orders.empty()) throw ConfigError("at least one n-gram order is required");
  for (std::size_t n : orders) {
    if (n < 1 || n > 3) throw ConfigError("n-gram orders must be 1, 2 or 3");
  }
}

std::uint64_t AffinityEntry::total_docs() const {
  std::uint64_t t = 0;
  for (auto c : doc_counts) t += c;
  return t;
}

AffinityEntry affinity_from_counts(std::vector<std::uint32_t> counts, double alpha,
                                   std::size_t order) {
  const std::size_t n_domains = counts.size();
  if (n_domains < 2) throw InputError("affinity needs at least 2 domains");
  AffinityEntry e;
  e.order = order;
  double total = 0.0;
  for (auto c : counts) total += c;
  const double denom = total + alpha * static_cast<double>(n_domains);
  if (!(denom > 0.0)) throw InputError("affinity entry with zero counts and zero smoothing");

  e.prob.resize(n_domains);
  for (std::size_t d = 0; d < n_domains; ++d) e.prob[d] = (counts[d] + alpha) / denom;

  const bool uniform = std::all_of(counts.begin(), counts.end(),
                                   [&](std::uint32_t c) { return c == counts.front(); });
  double h = 0.0;
  for (double p : e.prob) {
    if (p > 0.0) h -= p * std::log(p);
  }
  const double log_n = std::log(static_cast<double>(n_domains));
  e.entropy = uniform ? log_n : h;
  // Uniform rows sit exactly at the entropy maximum.
  const double concentration = uniform ? 0.0 : std::clamp(1.0 - h / log_n, 0.0, 1.0);

  e.rho.resize(n_domains);
  for (std::size_t d = 0; d < n_domains; ++d) e.rho[d] = e.prob[d] * concentration;
  e.doc_counts = std::move(counts);
  return e;
}

AffinityTable::AffinityTable(DomainSet domains, AffinityConfig config)
    : domains_(std::move(domains)), config_(std::move(config)) {}

const AffinityEntry* AffinityTable::find(std::string_view key) const {
  auto it = entries_.find(std::string(key));
  return it == entries_.end() ? nullptr : &it->second;
}

void AffinityTable::insert(std::string key, AffinityEntry entry) {
  entries_.insert_or_assign(std::move(key), std::move(entry));
}

std::vector<std::string> AffinityTable::sorted_keys() const {
  std::vector<std::string> keys;
  keys.reserve(entries_.size());
  for (const auto& [k, _] : entries_) keys.push_back(k);
  std::sort(keys.begin(), keys.end(), [&](const std::string& a, const std::string& b) {
    auto oa = entries_.at(a).order;
    auto ob = entries_.at(b).order;
    return oa != ob ? oa < ob : a < b;
  });
  return keys;
}

AffinityTable build_table(const Corpus& corpus, const AffinityConfig& config) {
  config.validate();
  corpus.require_multi_domain();
  const std::size_t n_domains = corpus.domains.size();

  struct Tally {
    std::size_t order;
    std::vector<std::uint32_t> counts;
  };
  std::unordered_map<std::string, Tally> tallies;
  std::unordered_set<std::string> seen;
  for (const auto& doc : corpus.documents) {
    const DomainIndex d = corpus.domain_of(doc);
    seen.clear();
    for (auto& occ : extract_ngrams(doc, config.orders)) {
      if (!seen.insert(occ.key).second) continue;  // once per document
      auto [it, inserted] = tallies.try_emplace(std::move(occ.key));
      if (inserted) {
        it->second.order = occ.order;
        it->second.counts.assign(n_domains, 0);
      }
      ++it->second.counts[d];
    }
  }

  AffinityTable table(corpus.domains, config);
  for (auto& [key, tally] : tallies) {
    std::uint64_t total = 0;
    for (auto c : tally.counts) total += c;
    if (total < config.min_doc_freq) continue;
    const double alpha = config.smoothing.at(tally.order - 1);
    table.insert(key, affinity_from_counts(std::move(tally.counts), alpha, tally.order));
  }
  return table;
}

double transfer_score(const AffinityTable& table, std::string_view key, DomainIndex source,
                      DomainIndex target) {
  if (source == target) throw ConfigError("source and target domains must differ");
  const std::size_t n = table.domains().size();
  if (source >= n || target >= n) throw InputError("domain index out of range for table");
  const AffinityEntry* e = table.find(key);
  if (!e) return 0.0;
  return e->rho[source] - e->rho[target];
}

MaskedDocument mask_step1(const Document& doc, const AffinityTable& table, DomainIndex source,
                          DomainIndex target, double tau1,
                          const std::vector<std::size_t>& orders) {
  if (source == target) throw ConfigError("source and target domains must differ");
  MaskedDocument md(doc, source, target);
  std::vector<std::size_t> passes = orders;
  std::sort(passes.begin(), passes.end());
  passes.erase(std::unique(passes.begin(), passes.end()), passes.end());
  for (std::size_t n : passes) {
    if (n < 1 || n > 3) throw ConfigError("n-gram orders must be 1, 2 or 3");
    for (std::size_t i = 0; i + n <= doc.size(); ++i) {
      if (md.overlaps_any(i, n)) continue;
      const double score = transfer_score(table, ngram_key(doc, i, n), source, target);
      if (score > tau1) md.add({i, n, MaskStep::step1, score});
    }
  }
  return md;
}

std::string table_to_json(const AffinityTable& table) {
  using nlohmann::json;
  const auto& cfg = table.config();
  json j;
  j["format"] = "remask-affinity-table";
  j["version"] = 1;
  j["config"] = {{"domains", table.domains().labels()},
                 {"smoothing", cfg.smoothing},
                 {"min_doc_freq", cfg.min_doc_freq},
                 {"orders", cfg.orders}};
  json entries = json::array();
  for (const auto& key : table.sorted_keys()) {
    const auto& e = table.entries().at(key);
    entries.push_back({{"key", key}, {"n", e.order}, {"counts", e.doc_counts}, {"rho", e.rho}});
  }
  j["entries"] = std::move(entries);
  return j.dump();
}

AffinityTable table_from_json(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed affinity table: ") + e.what());
  }
  try {
    if (j.at("format") != "remask-affinity-table") throw InputError("not an affinity table");
    const auto& c = j.at("config");
    AffinityConfig cfg;
    cfg.smoothing = c.at("smoothing").get<std::array<double, 3>>();
    cfg.min_doc_freq = c.at("min_doc_freq").get<std::size_t>();
    cfg.orders = c.at("orders").get<std::vector<std::size_t>>();
    cfg.validate();
    DomainSet domains(c.at("domains").get<std::vector<std::string>>());
    if (domains.size() < 2) throw InputError("affinity table needs at least 2 domains");
    AffinityTable table(domains, cfg);
    for (const auto& rec : j.at("entries")) {
      auto key = rec.at("key").get<std::string>();
      auto n = rec.at("n").get<std::size_t>();
      if (n < 1 || n > 3) throw InputError("entry '" + key + "' has invalid order");
      auto counts = rec.at("counts").get<std::vector<std::uint32_t>>();
      auto rho = rec.at("rho").get<std::vector<double>>();
      if (counts.size() != domains.size() || rho.size() != domains.size()) {
        throw InputError("entry '" + key + "' does not match the domain count");
      }
      AffinityEntry e = affinity_from_counts(std::move(counts), cfg.smoothing[n - 1], n);
      for (std::size_t d = 0; d < rho.size(); ++d) {
        if (std::abs(rho[d] - e.rho[d]) > 1e-9) {
          throw InputError("entry '" + key + "' has rho inconsistent with its counts");
        }
      }
      e.rho = std::move(rho);
      table.insert(std::move(key), std::move(e));
    }
    return table;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed affinity table: ") + e.what());
  }
}

void save_table(const AffinityTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << table_to_json(table) << '\n';
}

AffinityTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open affinity table " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return table_from_json(buf.str());
}

}  // namespace remask
