#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "remask/bridge_client.hpp"
#include "remask/error.hpp"
#include "remask/pipeline.hpp"
#include "remask/saliency.hpp"

using Tokens = std::vector<std::string>;

namespace {

std::vector<std::string> fake_bridge(std::vector<std::string> domains) {
  std::vector<std::string> cmd{"python3", REMASK_TEST_SUPPORT "/fake_bridge.py"};
  cmd.insert(cmd.end(), domains.begin(), domains.end());
  return cmd;
}

}  // namespace

TEST_CASE("score response validation") {
  auto r = remask::parse_score_response(
      R"({"id":"1","tokens":["a","b"],"saliency":[0.5,0],"proba":[0.25,0.75],"domains":["y","x"]})");
  CHECK(r.tokens == Tokens{"a", "b"});
  CHECK(remask::align_proba(r, remask::DomainSet({"x", "y"})) == std::vector<double>{0.75, 0.25});
  CHECK_THROWS_AS(remask::align_proba(r, remask::DomainSet({"x", "z"})), remask::InputError);

  auto bad = [](const char* line) {
    CHECK_THROWS_AS(remask::parse_score_response(line), remask::InputError);
  };
  bad(R"({"id":"1","tokens":["a"],"saliency":[0.5,1],"proba":[0.5,0.5],"domains":["x","y"]})");
  bad(R"({"id":"1","tokens":["a"],"saliency":[-0.5],"proba":[0.5,0.5],"domains":["x","y"]})");
  bad(R"({"id":"1","tokens":["a"],"saliency":[0.5],"proba":[0.5,0.6],"domains":["x","y"]})");
  bad(R"({"id":"1","tokens":["a"],"saliency":[0.5],"proba":[1.0],"domains":["x","y"]})");
  bad(R"({"id":"1","error":"model not loaded"})");
  bad("garbage");
  CHECK_NOTHROW(remask::parse_score_response(
      R"({"id":"1","tokens":[],"saliency":[],"proba":[0.4999995,0.5000004],"domains":["x","y"]})"));
}

TEST_CASE("requests follow the corpus tokenization") {
  remask::Corpus corpus;
  remask::add_document(corpus, remask::make_document("d1", "x", "Hello, World!"));
  remask::add_document(corpus, remask::make_document("d2", "y", ""));
  auto reqs = remask::corpus_requests(corpus);
  REQUIRE(reqs.size() == 2);
  CHECK(reqs[0].text == "hello , world !");
  CHECK(reqs[0].source_domain == "x");
  CHECK(remask::requests_jsonl(reqs) ==
        "{\"id\":\"d1\",\"source_domain\":\"x\",\"text\":\"hello , world !\"}\n"
        "{\"id\":\"d2\",\"source_domain\":\"y\",\"text\":\"\"}\n");
}

TEST_CASE("bridge process round trip") {
  remask::Corpus corpus;
  for (int i = 0; i < 50; ++i) {
    remask::add_document(corpus, remask::make_document("s" + std::to_string(i), i % 2 ? "y" : "x",
                                                       "an apple a day " + std::string(i % 5, 'z')));
  }
  remask::BridgeScorer scorer(fake_bridge({"x", "y"}), corpus.domains);
  remask::SaliencyMap map;
  for (const auto& req : remask::corpus_requests(corpus)) {
    auto resp = scorer.score(req);
    CHECK(resp.id == req.id);
    const auto& doc = corpus.documents[map.size()];
    auto sal = remask::response_to_saliency(resp, doc);
    CHECK(sal.scores.size() == doc.size());
    map[doc.id] = sal;
  }
  std::string jsonl;
  for (const auto& doc : corpus.documents) jsonl += remask::saliency_record_json(map.at(doc.id), doc.tokens) + "\n";
  CHECK(remask::parse_external_saliency(jsonl, corpus).size() == 50);

  auto p = scorer.predict_proba({"apple", "<m>"});
  CHECK(std::abs(p[0] + p[1] - 1.0) < 1e-9);
  CHECK(p[0] > 0.5);
  CHECK_THROWS_AS(scorer.score({"z", "__fail__", "x"}), remask::InputError);
  CHECK_NOTHROW(scorer.score({"z2", "still alive", "x"}));
}

TEST_CASE("bridge scorer plugs into the pipeline") {
  remask::Corpus corpus;
  for (int i = 0; i < 24; ++i) {
    remask::add_document(corpus, remask::make_document("s" + std::to_string(i), i % 2 ? "y" : "x",
                                                       i % 2 ? "bread and butter daily" : "apples and apricots daily"));
  }
  auto table = remask::build_table(corpus);
  remask::BridgeScorer scorer(fake_bridge({"x", "y"}), corpus.domains);
  auto r = remask::run_pipeline(corpus.documents[0], table, scorer, remask::SaliencySource::occlusion(), {}, 0, 1);
  CHECK(remask::positions_subset(r.step3_spans, r.step2_spans));
  REQUIRE(r.trace.has_value());
}

TEST_CASE("missing bridge executable") {
  remask::BridgeProcess p({"/nonexistent/bridge"});
  CHECK_THROWS_AS(p.exchange("{}"), remask::InputError);
}
