#include "remask/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "remask/classifier.hpp"
#include "remask/error.hpp"

namespace remask {
namespace {

std::vector<std::string> visible(const std::vector<std::string>& tokens,
                                 const std::vector<MaskSpan>& spans) {
  std::vector<bool> masked(tokens.size(), false);
  for (const auto& s : spans) {
    for (std::size_t p = s.start; p < s.end() && p < tokens.size(); ++p) masked[p] = true;
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!masked[i]) out.push_back(tokens[i]);
  }
  return out;
}

std::vector<std::string> split_visible(std::string_view text, std::string_view sentinel) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(' ', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view piece = text.substr(pos, end - pos);
    if (!piece.empty() && piece != sentinel) out.emplace_back(piece);
    pos = end + 1;
  }
  return out;
}

// Fisher-Yates with modulo draws keeps shuffles identical across standard
// library implementations.
void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[rng() % i]);
  }
}

std::size_t argmax(const std::vector<double>& p) {
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

// Largest-remainder allocation of `size` over strata, at least one per stratum.
std::vector<std::size_t> allocate(std::size_t size, const std::vector<std::size_t>& available) {
  const std::size_t n = available.size();
  std::size_t pool = 0;
  for (auto a : available) pool += a;
  std::vector<std::size_t> take(n, 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t d = 0; d < n; ++d) {
    const double exact = static_cast<double>(size) * available[d] / static_cast<double>(pool);
    take[d] = static_cast<std::size_t>(std::floor(exact));
    assigned += take[d];
    remainders.emplace_back(exact - std::floor(exact), d);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < size; i = (i + 1) % n) {
    const std::size_t d = remainders[i].second;
    if (take[d] < available[d]) {
      ++take[d];
      ++assigned;
    }
  }
  for (std::size_t d = 0; d < n; ++d) {
    if (take[d] == 0) {
      // Borrow from the largest stratum so every domain is represented.
      auto big = static_cast<std::size_t>(std::max_element(take.begin(), take.end()) - take.begin());
      if (take[big] <= 1 || available[d] == 0) {
        throw InputError("training size " + std::to_string(size) + " too small to cover every domain");
      }
      --take[big];
      ++take[d];
    }
  }
  return take;
}

}  // namespace

std::vector<LeakageExample> leakage_examples(const Corpus& corpus,
                                             const std::vector<ObfuscationResult>& results) {
  std::unordered_map<const Document*, const ObfuscationResult*> first;
  for (const auto& r : results) first.emplace(r.doc, &r);
  std::vector<LeakageExample> out;
  out.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    auto it = first.find(&doc);
    if (it == first.end()) throw InputError("no pipeline output for document '" + doc.id + "'");
    out.push_back({corpus.domain_of(doc), doc.tokens, visible(doc.tokens, it->second->step1_spans),
                   visible(doc.tokens, it->second->step3_spans)});
  }
  return out;
}

std::vector<LeakageExample> leakage_examples(const Corpus& corpus,
                                             const std::vector<MaskedRecord>& records,
                                             std::string_view sentinel) {
  std::unordered_map<std::string, const MaskedRecord*> first;
  for (const auto& r : records) first.emplace(r.id, &r);
  std::vector<LeakageExample> out;
  out.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    auto it = first.find(doc.id);
    if (it == first.end()) throw InputError("no masked record for document '" + doc.id + "'");
    out.push_back({corpus.domain_of(doc), doc.tokens, split_visible(it->second->masked_step1, sentinel),
                   split_visible(it->second->masked_step3, sentinel)});
  }
  return out;
}

LeakageReport leakage_eval(const DomainSet& domains, const std::vector<LeakageExample>& examples,
                           std::vector<std::size_t> sizes, std::uint64_t seed, double smoothing) {
  const std::size_t n = domains.size();
  if (n < 2) throw InputError("leakage evaluation needs at least 2 domains");
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

  std::vector<std::vector<std::size_t>> by_domain(n);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].domain >= n) throw InputError("example domain out of range");
    by_domain[examples[i].domain].push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> test;
  std::vector<std::vector<std::size_t>> pool(n);
  for (std::size_t d = 0; d < n; ++d) {
    auto idx = by_domain[d];
    shuffle(idx, rng);
    const auto n_test = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(idx.size())));
    test.insert(test.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_test));
    pool[d].assign(idx.begin() + static_cast<std::ptrdiff_t>(n_test), idx.end());
  }
  std::vector<std::size_t> available(n);
  std::size_t pool_size = 0;
  for (std::size_t d = 0; d < n; ++d) {
    available[d] = pool[d].size();
    pool_size += available[d];
  }
  if (test.empty()) throw InputError("held-out split is empty");

  LeakageReport report;
  report.test_size = test.size();
  for (std::size_t size : sizes) {
    if (size > pool_size) {
      throw InputError("training size " + std::to_string(size) + " exceeds the " +
                       std::to_string(pool_size) + " available training documents");
    }
    if (size < n) throw InputError("training size " + std::to_string(size) + " is below the domain count");
    const auto take = allocate(size, available);
    std::vector<std::size_t> train;
    for (std::size_t d = 0; d < n; ++d) {
      auto idx = pool[d];
      shuffle(idx, rng);
      train.insert(train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take[d]));
    }
    auto accuracy = [&](auto variant) {
      std::vector<LabeledTokens> train_set;
      train_set.reserve(train.size());
      for (auto i : train) train_set.push_back({&(examples[i].*variant), examples[i].domain});
      const auto model = train_classifier(domains, train_set, smoothing);
      std::size_t correct = 0;
      for (auto i : test) {
        if (argmax(model.predict_proba(examples[i].*variant)) == examples[i].domain) ++correct;
      }
      return static_cast<double>(correct) / static_cast<double>(test.size());
    };
    report.rows.push_back({size, accuracy(&LeakageExample::raw), accuracy(&LeakageExample::step1),
                           accuracy(&LeakageExample::full)});
  }
  return report;
}

LeakageReport leakage_eval_mean(const DomainSet& domains, const std::vector<LeakageExample>& examples,
                                const std::vector<std::size_t>& sizes, std::uint64_t seed,
                                std::size_t count, double smoothing) {
  if (count == 0) throw ConfigError("at least one seed is required");
  LeakageReport mean;
  for (std::size_t s = 0; s < count; ++s) {
    auto r = leakage_eval(domains, examples, sizes, seed + s, smoothing);
    if (s == 0) {
      mean = r;
      continue;
    }
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      mean.rows[i].raw += r.rows[i].raw;
      mean.rows[i].step1 += r.rows[i].step1;
      mean.rows[i].full += r.rows[i].full;
    }
  }
  for (auto& row : mean.rows) {
    row.raw /= static_cast<double>(count);
    row.step1 /= static_cast<double>(count);
    row.full /= static_cast<double>(count);
  }
  mean.seeds = count;
  return mean;
}

std::string format_leakage_report(const LeakageReport& report) {
  std::ostringstream out;
  out << "# Domain classification accuracy on masked text (%)\n";
  out << "# bag-of-words classifier, directional analogue; held-out " << report.test_size
      << " docs, " << report.seeds << " seed(s)\n";
  out << std::left << std::setw(22) << "Text / #Train Samples";
  for (const auto& row : report.rows) out << std::right << std::setw(9) << row.size;
  out << '\n';
  auto line = [&](const char* name, double LeakageRow::*field) {
    out << std::left << std::setw(22) << name << std::fixed << std::setprecision(1);
    for (const auto& row : report.rows) out << std::right << std::setw(9) << 100.0 * (row.*field);
    out << '\n';
  };
  line("Raw", &LeakageRow::raw);
  line("Step1 masked", &LeakageRow::step1);
  line("Full pipeline", &LeakageRow::full);
  return out.str();
}

std::string leakage_report_json(const LeakageReport& report) {
  nlohmann::json j;
  j["test_size"] = report.test_size;
  j["seeds"] = report.seeds;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) {
    j["rows"].push_back({{"size", r.size}, {"raw", r.raw}, {"step1", r.step1}, {"full", r.full}});
  }
  return j.dump();
}

const MaskCountCell* MaskCountReport::find(std::string_view source, std::string_view target) const {
  for (const auto& c : cells) {
    if (c.source == source && c.target == target) return &c;
  }
  return nullptr;
}

MaskCountReport mask_count_report(const std::vector<MaskedRecord>& records) {
  MaskCountReport report;
  DomainSet order;
  struct Sum {
    std::size_t docs = 0;
    std::array<double, 3> total{};
  };
  std::map<std::pair<DomainIndex, DomainIndex>, Sum> sums;
  for (const auto& r : records) {
    const DomainIndex s = order.intern(r.source);
    const DomainIndex t = order.intern(r.target);
    auto& sum = sums[{s, t}];
    ++sum.docs;
    const auto counts = r.mask_counts();
    for (std::size_t k = 0; k < 3; ++k) sum.total[k] += static_cast<double>(counts[k]);
  }
  report.domains = order.labels();
  for (const auto& [key, sum] : sums) {
    MaskCountCell cell;
    cell.source = order.label(key.first);
    cell.target = order.label(key.second);
    cell.documents = sum.docs;
    for (std::size_t k = 0; k < 3; ++k) cell.average[k] = sum.total[k] / static_cast<double>(sum.docs);
    report.cells.push_back(std::move(cell));
  }
  return report;
}

std::string format_mask_count_grid(const MaskCountReport& report) {
  constexpr int kCol = 7;
  const int group = 3 * kCol;
  std::size_t label_width = 6;
  for (const auto& d : report.domains) label_width = std::max(label_width, d.size());
  const int lw = static_cast<int>(label_width) + 1;

  std::ostringstream out;
  out << "# Average number of masked tokens per step (rows: source, groups: target)\n";
  out << std::left << std::setw(lw) << "";
  for (const auto& d : report.domains) {
    const int pad = group - static_cast<int>(d.size());
    out << "|" << std::string(static_cast<std::size_t>(std::max(pad / 2, 0)), ' ') << d
        << std::string(static_cast<std::size_t>(std::max(pad - pad / 2, 0)), ' ');
  }
  out << "|\n";
  out << std::left << std::setw(lw) << "Domain";
  for (std::size_t i = 0; i < report.domains.size(); ++i) {
    out << "|" << std::right << std::setw(kCol) << "Step1" << std::setw(kCol) << "+Step2"
        << std::setw(kCol) << "+Step3";
  }
  out << "|\n";
  for (const auto& src : report.domains) {
    out << std::left << std::setw(lw) << src;
    for (const auto& tgt : report.domains) {
      out << "|";
      const MaskCountCell* cell = report.find(src, tgt);
      for (std::size_t k = 0; k < 3; ++k) {
        if (cell) {
          out << std::right << std::setw(kCol) << std::fixed << std::setprecision(1) << cell->average[k];
        } else {
          out << std::right << std::setw(kCol) << "-";
        }
      }
    }
    out << "|\n";
  }
  return out.str();
}

std::string mask_count_json(const MaskCountReport& report) {
  nlohmann::json j;
  j["domains"] = report.domains;
  j["cells"] = nlohmann::json::array();
  for (const auto& c : report.cells) {
    j["cells"].push_back({{"source", c.source},
                          {"target", c.target},
                          {"documents", c.documents},
                          {"step1", c.average[0]},
                          {"step2", c.average[1]},
                          {"step3", c.average[2]}});
  }
  return j.dump();
}

}  // namespace remask
