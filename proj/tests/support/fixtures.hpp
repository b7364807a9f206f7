#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "remask/classifier.hpp"
#include "remask/corpus.hpp"

namespace fixtures {

// D1: "a a b", D2: "b b".
inline remask::Corpus toy_corpus() {
  remask::Corpus c;
  remask::add_document(c, remask::make_document("t1", "D1", std::vector<std::string>{"a", "a", "b"}));
  remask::add_document(c, remask::make_document("t2", "D2", std::vector<std::string>{"b", "b"}));
  return c;
}

inline remask::NaiveBayesModel toy_model() { return remask::train_classifier(toy_corpus(), 1.0); }

struct RandomCorpusShape {
  std::size_t documents = 12;
  std::size_t domains = 2;
  std::size_t vocabulary = 40;
  std::size_t max_length = 14;
};

// Small corpus over a shared vocabulary where each domain prefers a slice of
// the words, so the table and classifier carry some signal.
inline remask::Corpus random_corpus(std::uint64_t seed, const RandomCorpusShape& shape = {}) {
  std::mt19937_64 rng(seed);
  remask::Corpus c;
  for (std::size_t i = 0; i < shape.documents; ++i) {
    const std::size_t d = i % shape.domains;
    const std::size_t len = std::uniform_int_distribution<std::size_t>(0, shape.max_length)(rng);
    std::vector<std::string> tokens;
    for (std::size_t k = 0; k < len; ++k) {
      if (rng() % 3 == 0) {
        tokens.push_back("x" + std::to_string(d) + "_" + std::to_string(rng() % 4));
      } else {
        tokens.push_back(oracle::random_word(rng, shape.vocabulary));
      }
    }
    remask::add_document(c, remask::make_document("r" + std::to_string(i),
                                                  "dom" + std::to_string(d), std::move(tokens)));
  }
  return c;
}

}  // namespace fixtures
