#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "remask/error.hpp"
#include "remask/saliency.hpp"

using remask::MaskStep;
using remask::Tau2Policy;
using Tokens = std::vector<std::string>;

namespace {

constexpr double kScoreA = 0.213577421815408;     // 0.5614 - 0.3478
constexpr double kScoreB = -0.14447884416924672;  // 0.5614 - 0.7059

remask::SaliencyVector scores_of(const remask::Document& doc, std::vector<double> s) {
  return {doc.id, remask::SaliencyProvider::external_attention_score, std::move(s)};
}

std::string message_of(const std::string& contents, const remask::Corpus& corpus) {
  try {
    remask::parse_external_saliency(contents, corpus);
  } catch (const remask::InputError& e) {
    return e.what();
  }
  return "no error";
}

}  // namespace

TEST_CASE("occlusion saliency on the toy model") {
  auto model = fixtures::toy_model();
  auto doc = remask::make_document("q", "D1", Tokens{"a", "b"});
  auto sal = remask::occlusion_saliency(doc, model, 0);
  REQUIRE(sal.scores.size() == 2);
  CHECK(std::abs(sal.scores[0] - kScoreA) < 1e-12);
  CHECK(std::abs(sal.scores[1] - kScoreB) < 1e-12);
  CHECK(std::abs(sal.scores[0] - 0.2136) < 1e-4);
  CHECK(std::abs(sal.scores[1] + 0.1445) < 1e-4);
  CHECK(sal.provider == remask::SaliencyProvider::occlusion);
  CHECK(sal.doc_id == "q");
}

TEST_CASE("occlusion saliency trivial cases") {
  auto model = fixtures::toy_model();
  auto single = remask::make_document("s", "D1", Tokens{"a"});
  CHECK(remask::occlusion_saliency(single, model, 0).scores[0] ==
        model.domain_probability({"a"}, 0) - model.priors()[0]);
  auto dup = remask::make_document("d", "D1", Tokens{"a", "b", "a", "zzz"});
  auto sal = remask::occlusion_saliency(dup, model, 0);
  CHECK(sal.scores[0] == sal.scores[2]);
  CHECK(sal.scores[3] == 0.0);
  CHECK(remask::occlusion_saliency(remask::make_document("e", "D1", Tokens{}), model, 0).scores.empty());
}

TEST_CASE("quantile matches the linear-interpolation oracle") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 30);
    std::vector<long double> lv;
    for (auto& x : v) {
      x = std::uniform_real_distribution<double>(-1, 1)(rng);
      lv.push_back(x);
    }
    const double q = std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(std::abs(remask::quantile(v, q) - static_cast<double>(oracle::quantile(lv, q))) < 1e-12);
  }
  CHECK(remask::quantile({1, 2, 3, 4}, 0.5) == 2.5);
  CHECK_THROWS_AS(remask::quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("quantile 0.8 over ten distinct scores masks the top two") {
  Tokens t;
  for (int i = 0; i < 10; ++i) t.push_back("t" + std::to_string(i));
  auto doc = remask::make_document("q", "x", t);
  remask::MaskedDocument md(doc, 0, 1);
  auto out = remask::mask_step2(md, scores_of(doc, {0.3, 0.9, 0.1, 0.5, 0.2, 0.8, 0.0, 0.4, 0.6, 0.7}),
                                Tau2Policy::quantile(0.8));
  REQUIRE(out.spans().size() == 2);
  CHECK(out.spans()[0].start == 1);
  CHECK(out.spans()[1].start == 5);
  CHECK(out.spans()[0].step == MaskStep::step2);
  CHECK(out.spans()[0].score == 0.9);
}

TEST_CASE("quantile is taken over the still-unmasked positions") {
  Tokens t;
  for (int i = 0; i < 6; ++i) t.push_back("t" + std::to_string(i));
  auto doc = remask::make_document("q", "x", t);
  remask::MaskedDocument md(doc, 0, 1);
  md.add({0, 1, MaskStep::step1, 1.0});
  // Open scores: 0.1 0.2 0.3 0.4 0.5; q=0.5 -> 0.3.
  auto out = remask::mask_step2(md, scores_of(doc, {9.0, 0.1, 0.2, 0.3, 0.4, 0.5}),
                                Tau2Policy::quantile(0.5));
  CHECK(out.spans().size() == 3);
  CHECK(out.is_masked(4));
  CHECK(out.is_masked(5));
  CHECK_FALSE(out.is_masked(3));
}

TEST_CASE("absolute threshold and monotone growth") {
  auto doc = remask::make_document("q", "x", Tokens{"a", "b", "c", "d"});
  remask::MaskedDocument md(doc, 0, 1);
  md.add({1, 2, MaskStep::step1, 0.5});
  auto sal = scores_of(doc, {0.2, 0.9, 0.9, 0.15});
  auto none = remask::mask_step2(md, sal, Tau2Policy::absolute(0.5));
  CHECK(none.spans() == md.spans());
  auto some = remask::mask_step2(md, sal, Tau2Policy::absolute(0.15));
  CHECK(some.spans().size() == 2);
  CHECK(some.is_masked(0));
  CHECK_FALSE(some.is_masked(3));
  CHECK(remask::positions_subset(md.spans(), some.spans()));
  CHECK_THROWS_AS(remask::mask_step2(md, scores_of(doc, {0.1}), Tau2Policy::absolute(0)),
                  remask::InputError);
}

TEST_CASE("planted exclusive token carries the maximum occlusion saliency") {
  std::mt19937_64 rng(2024);
  remask::Corpus corpus;
  std::vector<std::pair<std::size_t, Tokens>> raw;
  std::vector<std::size_t> planted_at;
  for (std::size_t i = 0; i < 300; ++i) {
    const std::size_t d = i % 3;
    Tokens tokens;
    const std::size_t len = 8 + rng() % 10;
    for (std::size_t k = 0; k < len; ++k) tokens.push_back("w" + std::to_string(rng() % 25));
    const std::size_t pos = rng() % (len + 1);
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                  "p" + std::to_string(d) + "_" + std::to_string(rng() % 5));
    planted_at.push_back(pos);
    raw.push_back({d, tokens});
    remask::add_document(corpus, remask::make_document("s" + std::to_string(i),
                                                       "dom" + std::to_string(d), tokens));
  }
  auto model = remask::train_classifier(corpus);
  oracle::NaiveBayes ref(3, raw, 1.0);
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& doc = corpus.documents[i];
    const std::size_t d = raw[i].first;
    auto sal = remask::occlusion_saliency(doc, model, d);
    // Brute force with the oracle posterior, position by position.
    const long double full = ref.posterior(doc.tokens)[d];
    long double best = -1;
    std::size_t best_pos = 0;
    for (std::size_t p = 0; p < doc.size(); ++p) {
      Tokens without = doc.tokens;
      without.erase(without.begin() + static_cast<std::ptrdiff_t>(p));
      const long double s = full - ref.posterior(without)[d];
      CHECK(std::abs(static_cast<double>(s) - sal.scores[p]) < 1e-9);
      if (s > best) {
        best = s;
        best_pos = p;
      }
    }
    CHECK(best_pos == planted_at[i]);
    CHECK(*std::max_element(sal.scores.begin(), sal.scores.end()) == sal.scores[planted_at[i]]);
  }
}

TEST_CASE("external saliency validation") {
  remask::Corpus corpus;
  remask::add_document(corpus, remask::make_document("d1", "x", "one two three"));
  remask::add_document(corpus, remask::make_document("d2", "y", "four five"));
  const std::string ok =
      "{\"doc_id\":\"d1\",\"tokens\":[\"one\",\"two\",\"three\"],\"scores\":[0.1,0.2,0.3],"
      "\"provider\":\"external_attention_norm\"}\n";
  auto map = remask::parse_external_saliency(ok, corpus);
  REQUIRE(map.size() == 1);
  CHECK(map.at("d1").scores == std::vector<double>{0.1, 0.2, 0.3});
  CHECK(remask::parse_external_saliency("", corpus).empty());

  CHECK(message_of("{\"doc_id\":\"d9\",\"tokens\":[],\"scores\":[],\"provider\":\"occlusion\"}", corpus)
            .find("d9") != std::string::npos);
  CHECK(message_of("{\"doc_id\":\"d2\",\"tokens\":[\"four\",\"five\"],\"scores\":[0.1],"
                   "\"provider\":\"occlusion\"}",
                   corpus)
            .find("d2") != std::string::npos);
  CHECK(message_of("{\"doc_id\":\"d2\",\"tokens\":[\"Four\",\"five\"],\"scores\":[0.1,0.2],"
                   "\"provider\":\"occlusion\"}",
                   corpus)
            .find("d2") != std::string::npos);
  CHECK(message_of("{\"doc_id\":\"d2\",\"tokens\":[\"four\",\"five\"],\"scores\":[-0.1,0.2],"
                   "\"provider\":\"external_attention_norm\"}",
                   corpus)
            .find("d2") != std::string::npos);
  CHECK_NOTHROW(remask::parse_external_saliency(
      "{\"doc_id\":\"d2\",\"tokens\":[\"four\",\"five\"],\"scores\":[-0.1,0.2],"
      "\"provider\":\"external_attention_score\"}",
      corpus));
  CHECK(message_of(ok + ok, corpus).find("duplicate") != std::string::npos);
  CHECK(message_of("{nope", corpus).find("line 1") != std::string::npos);
}

TEST_CASE("saliency records round trip") {
  remask::Corpus corpus;
  remask::add_document(corpus, remask::make_document("d1", "x", "alpha beta"));
  remask::add_document(corpus, remask::make_document("d2", "y", "gamma"));
  remask::SaliencyVector v{"d1", remask::SaliencyProvider::external_attention_norm, {0.25, 1.5}};
  auto map = remask::parse_external_saliency(remask::saliency_record_json(v, corpus.documents[0].tokens) + "\n",
                                             corpus);
  CHECK(map.at("d1").scores == v.scores);
  CHECK(map.at("d1").provider == v.provider);
}
