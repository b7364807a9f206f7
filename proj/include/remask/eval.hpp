#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "remask/corpus.hpp"
#include "remask/pipeline.hpp"
#include "remask/records.hpp"

namespace remask {

/// One document in three text variants, as token lists without mask sentinels.
struct LeakageExample {
  DomainIndex domain = 0;
  std::vector<std::string> raw;
  std::vector<std::string> step1;
  std::vector<std::string> full;
};

/// Uses the first result for each document, in corpus order. Throws
/// InputError when a document has no result.
std::vector<LeakageExample> leakage_examples(const Corpus& corpus,
                                             const std::vector<ObfuscationResult>& results);
std::vector<LeakageExample> leakage_examples(const Corpus& corpus,
                                             const std::vector<MaskedRecord>& records,
                                             std::string_view sentinel = kDefaultMaskSentinel);

struct LeakageRow {
  std::size_t size = 0;
  double raw = 0.0;
  double step1 = 0.0;
  double full = 0.0;
};

struct LeakageReport {
  std::vector<LeakageRow> rows;  // sizes strictly increasing
  std::size_t test_size = 0;
  std::size_t seeds = 1;
};

/// For every training size: a stratified 80/20 split of the examples (seeded)
/// fixes the held-out set; a stratified sample of `size` training examples is
/// drawn from the 80% pool and a fresh classifier is trained per text variant.
/// Throws InputError if a size exceeds the pool or is smaller than the number
/// of domains.
LeakageReport leakage_eval(const DomainSet& domains, const std::vector<LeakageExample>& examples,
                           std::vector<std::size_t> sizes, std::uint64_t seed,
                           double smoothing = 1.0);

/// Mean of leakage_eval over seeds seed, seed+1, ..., seed+count-1.
LeakageReport leakage_eval_mean(const DomainSet& domains,
                                const std::vector<LeakageExample>& examples,
                                const std::vector<std::size_t>& sizes, std::uint64_t seed,
                                std::size_t count, double smoothing = 1.0);

std::string format_leakage_report(const LeakageReport& report);
std::string leakage_report_json(const LeakageReport& report);

struct MaskCountCell {
  std::string source;
  std::string target;
  std::size_t documents = 0;
  std::array<double, 3> average{};  // after step1, step2, step3
};

struct MaskCountReport {
  std::vector<std::string> domains;  // first-seen order across sources and targets
  std::vector<MaskCountCell> cells;  // sorted by (source, target) domain order

  const MaskCountCell* find(std::string_view source, std::string_view target) const;
};

MaskCountReport mask_count_report(const std::vector<MaskedRecord>& records);

/// Rows are source domains; one Step1/+Step2/+Step3 column group per target.
std::string format_mask_count_grid(const MaskCountReport& report);
std::string mask_count_json(const MaskCountReport& report);

}  // namespace remask
