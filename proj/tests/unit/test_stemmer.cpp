#include <doctest.h>

#include <fstream>
#include <string>
#include <vector>

#include "remask/stemmer.hpp"

using remask::stem;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("stemmer examples") {
  CHECK(stem("running") == "run");
  CHECK(stem("a") == "a");
  CHECK(stem("satisfying") == "satisfi");
  CHECK(stem("generously") == "generous");
  CHECK(stem("skies") == "sky");
  CHECK(stem("dying") == "die");
  CHECK(stem("news") == "news");
  CHECK(stem("succeeded") == "succeed");
  CHECK(stem("communication") == "communic");
  CHECK(stem("'tis") == "tis");
  CHECK(stem("") == "");
}

TEST_CASE("stemmer is stable on its own output for the examples") {
  for (const char* w : {"run", "satisfi", "generous", "sky", "communic"}) {
    CHECK(stem(w) == w);
  }
}

TEST_CASE("stemmer matches the reference vocabulary") {
  const auto voc = read_lines(REMASK_TEST_DATA "/snowball_en_voc.txt");
  const auto out = read_lines(REMASK_TEST_DATA "/snowball_en_output.txt");
  REQUIRE(voc.size() == out.size());
  REQUIRE(voc.size() > 29000);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < voc.size(); ++i) {
    if (stem(voc[i]) != out[i]) ++mismatches;
  }
  CHECK(mismatches == 0);
}
