#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "remask/classifier.hpp"
#include "remask/error.hpp"

using Tokens = std::vector<std::string>;

namespace {

// Closed forms for the toy model: P(a|D1)=3/5, P(b|D1)=2/5, P(a|D2)=1/4, P(b|D2)=3/4.
constexpr double kPa = 0.7058823529411765;   // P(D1 | a)
constexpr double kPab = 0.5614035087719298;  // P(D1 | a b)
constexpr double kPb = 0.3478260869565218;   // P(D1 | b)

double loglik(const remask::NaiveBayesModel& m, const std::string& token, std::size_t d) {
  const auto& v = m.vocabulary();
  auto it = std::lower_bound(v.begin(), v.end(), token);
  REQUIRE(it != v.end());
  REQUIRE(*it == token);
  return m.token_loglik()[static_cast<std::size_t>(it - v.begin())][d];
}

}  // namespace

TEST_CASE("toy model likelihoods") {
  auto m = fixtures::toy_model();
  CHECK(m.priors() == std::vector<double>{0.5, 0.5});
  CHECK(std::exp(loglik(m, "a", 0)) == doctest::Approx(3.0 / 5).epsilon(1e-14));
  CHECK(std::exp(loglik(m, "b", 0)) == doctest::Approx(2.0 / 5).epsilon(1e-14));
  CHECK(std::exp(loglik(m, "a", 1)) == doctest::Approx(1.0 / 4).epsilon(1e-14));
  CHECK(std::exp(loglik(m, "b", 1)) == doctest::Approx(3.0 / 4).epsilon(1e-14));
}

TEST_CASE("toy model posteriors") {
  auto m = fixtures::toy_model();
  CHECK(std::abs(m.domain_probability({"a"}, 0) - kPa) < 1e-12);
  CHECK(std::abs(m.domain_probability({"a", "b"}, 0) - kPab) < 1e-12);
  CHECK(std::abs(m.domain_probability({"b"}, 0) - kPb) < 1e-12);
  CHECK(std::abs(m.domain_probability({"a"}, 0) - 0.7059) < 1e-4);
  CHECK(std::abs(m.domain_probability({"a", "b"}, 0) - 0.5614) < 1e-4);
  CHECK(m.predict_proba({}) == m.priors());
  CHECK(m.predict_proba({"zzz", "<m>"}) == m.priors());
}

TEST_CASE("classifier agrees with the count oracle on random corpora") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto corpus = fixtures::random_corpus(seed, {20, 2 + seed % 3, 40, 16});
    std::vector<std::pair<std::size_t, Tokens>> docs;
    for (const auto& d : corpus.documents) docs.push_back({corpus.domain_of(d), d.tokens});
    bool ok = true;
    for (std::size_t d = 0; d < corpus.domains.size(); ++d) {
      ok = ok && std::any_of(docs.begin(), docs.end(), [&](const auto& p) { return p.first == d; });
    }
    if (!ok) continue;
    auto model = remask::train_classifier(corpus, 1.0);
    oracle::NaiveBayes ref(corpus.domains.size(), docs, 1.0);
    std::mt19937_64 rng(seed);
    for (int q = 0; q < 20; ++q) {
      Tokens query;
      const std::size_t len = rng() % 12;
      for (std::size_t i = 0; i < len; ++i) query.push_back(oracle::random_word(rng, 60));
      auto got = model.predict_proba(query);
      auto want = ref.posterior(query);
      double sum = 0;
      for (std::size_t d = 0; d < got.size(); ++d) {
        CHECK(std::abs(got[d] - static_cast<double>(want[d])) < 1e-10);
        CHECK(got[d] > 0.0);
        CHECK(got[d] < 1.0);
        sum += got[d];
      }
      CHECK(std::abs(sum - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("model invariants") {
  auto corpus = fixtures::random_corpus(11, {30, 3, 40, 16});
  auto model = remask::train_classifier(corpus, 0.5);
  double prior_sum = 0;
  for (double p : model.priors()) prior_sum += p;
  CHECK(std::abs(prior_sum - 1.0) < 1e-9);
  for (std::size_t d = 0; d < corpus.domains.size(); ++d) {
    double mass = 0;
    for (const auto& row : model.token_loglik()) mass += std::exp(row[d]);
    CHECK(std::abs(mass - 1.0) < 1e-6);
  }
}

TEST_CASE("sentinels and permutations leave predictions unchanged") {
  auto corpus = fixtures::random_corpus(5, {30, 3, 40, 16});
  auto model = remask::train_classifier(corpus);
  std::mt19937_64 rng(99);
  for (const auto& doc : corpus.documents) {
    const auto base = model.predict_proba(doc.tokens);
    auto shuffled = doc.tokens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(model.predict_proba(shuffled) == base);
    auto padded = doc.tokens;
    padded.insert(padded.begin() + static_cast<std::ptrdiff_t>(rng() % (padded.size() + 1)), "<m>");
    CHECK(model.predict_proba(padded) == base);
  }
}

TEST_CASE("training is deterministic and round-trips through JSON") {
  auto corpus = fixtures::random_corpus(8, {30, 3, 40, 16});
  auto a = remask::train_classifier(corpus);
  auto b = remask::train_classifier(corpus);
  CHECK(a == b);
  auto back = remask::model_from_json(remask::model_to_json(a));
  CHECK(back == a);
  CHECK(back.predict_proba(corpus.documents[0].tokens) == a.predict_proba(corpus.documents[0].tokens));
  CHECK_THROWS_AS(remask::model_from_json("[]"), remask::InputError);
}

TEST_CASE("training errors") {
  remask::DomainSet domains({"x", "y"});
  Tokens t{"w"};
  CHECK_THROWS_AS(remask::train_classifier(domains, {{&t, 0}}), remask::InputError);
  CHECK_THROWS_AS(remask::train_classifier(domains, {{&t, 0}, {&t, 1}}, 0.0), remask::ConfigError);
  CHECK_NOTHROW(remask::train_classifier(domains, {{&t, 0}, {&t, 1}}));
}
