#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "remask/corpus.hpp"

namespace remask {

/// Seeded multi-domain corpus with a known domain signal:
///  - every domain owns `planted_per_domain` exclusive tokens ("d<k>p<j>"),
///    drawn Zipf-style so the tail is rarer than the table's min_doc_freq;
///  - a shared background vocabulary ("w<j>") in which each word has a home
///    domain where it is `background_skew` times more likely.
struct SyntheticCorpusSpec {
  std::size_t documents = 2000;
  std::size_t domains = 3;
  std::size_t planted_per_domain = 30;
  std::size_t background_vocabulary = 400;
  std::size_t min_length = 30;
  std::size_t max_length = 80;
  std::size_t min_planted = 1;
  std::size_t max_planted = 4;
  double planted_zipf = 1.1;
  double background_zipf = 1.0;
  double background_skew = 1.6;
  std::uint64_t seed = 1;
};

Corpus synthetic_corpus(const SyntheticCorpusSpec& spec);

/// The same corpus as JSON lines in the corpus file format.
std::string synthetic_corpus_jsonl(const SyntheticCorpusSpec& spec);

std::string planted_token(std::size_t domain, std::size_t index);

}  // namespace remask
