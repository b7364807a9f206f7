#include "remask/stemmer.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>
#include <string>
#include <utility>

// English Snowball stemmer, original (2006) rule set. Regions are positions
// into the working string; 'Y' marks a consonantal y until the postlude.

namespace remask {
namespace {

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         std::equal(suffix.rbegin(), suffix.rend(), w.rbegin());
}

// Longest entry of `suffixes` the word ends with, or an empty view.
std::string_view longest_suffix(const std::string& w,
                                std::initializer_list<std::string_view> suffixes) {
  std::string_view best;
  for (auto s : suffixes) {
    if (s.size() > best.size() && ends_with(w, s)) best = s;
  }
  return best;
}

bool has_vowel(const std::string& w, std::size_t begin, std::size_t end) {
  for (std::size_t i = begin; i < end && i < w.size(); ++i) {
    if (is_vowel(w[i])) return true;
  }
  return false;
}

// Ends in a short syllable: non-vowel, vowel, non-vowel other than w/x/Y; or
// the whole prefix is vowel + non-vowel.
bool short_syllable_at(const std::string& w, std::size_t len) {
  if (len >= 3) {
    char last = w[len - 1];
    if (!is_vowel(w[len - 3]) && is_vowel(w[len - 2]) && !is_vowel(last) && last != 'w' &&
        last != 'x' && last != 'Y') {
      return true;
    }
  }
  return len == 2 && is_vowel(w[0]) && !is_vowel(w[1]);
}

void replace_suffix(std::string& w, std::size_t suffix_len, std::string_view replacement) {
  w.resize(w.size() - suffix_len);
  w += replacement;
}

bool is_double(const std::string& w) {
  if (w.size() < 2) return false;
  char a = w[w.size() - 1];
  if (a != w[w.size() - 2]) return false;
  return a == 'b' || a == 'd' || a == 'f' || a == 'g' || a == 'm' || a == 'n' || a == 'p' ||
         a == 'r' || a == 't';
}

bool is_li_ending(char c) {
  return c == 'c' || c == 'd' || c == 'e' || c == 'g' || c == 'h' || c == 'k' || c == 'm' ||
         c == 'n' || c == 'r' || c == 't';
}

const std::string* exceptional_form(const std::string& w) {
  static const std::array<std::pair<std::string, std::string>, 18> table{{
      {"skis", "ski"},     {"skies", "sky"},   {"dying", "die"},   {"lying", "lie"},
      {"tying", "tie"},    {"idly", "idl"},    {"gently", "gentl"}, {"ugly", "ugli"},
      {"early", "earli"},  {"only", "onli"},   {"singly", "singl"}, {"sky", "sky"},
      {"news", "news"},    {"howe", "howe"},   {"atlas", "atlas"}, {"cosmos", "cosmos"},
      {"bias", "bias"},    {"andes", "andes"},
  }};
  for (const auto& [from, to] : table) {
    if (from == w) return &to;
  }
  return nullptr;
}

bool is_invariant_after_1a(const std::string& w) {
  for (std::string_view s : {"inning", "outing", "canning", "herring", "earring", "proceed",
                             "exceed", "succeed"}) {
    if (w == s) return true;
  }
  return false;
}

struct Regions {
  std::size_t r1;
  std::size_t r2;
};

std::size_t region_after(const std::string& w, std::size_t from) {
  std::size_t i = from;
  while (i < w.size() && !is_vowel(w[i])) ++i;
  while (i < w.size() && is_vowel(w[i])) ++i;
  return i < w.size() ? i + 1 : w.size();
}

Regions mark_regions(const std::string& w) {
  std::size_t r1 = w.size();
  bool prefixed = false;
  for (std::string_view p : {"gener", "commun", "arsen"}) {
    if (w.compare(0, p.size(), p) == 0) {
      r1 = p.size();
      prefixed = true;
      break;
    }
  }
  if (!prefixed) r1 = region_after(w, 0);
  std::size_t r2 = r1 < w.size() ? region_after(w, r1) : w.size();
  return {r1, r2};
}

void step0(std::string& w) {
  auto s = longest_suffix(w, {"'", "'s", "'s'"});
  if (!s.empty()) replace_suffix(w, s.size(), "");
}

void step1a(std::string& w) {
  auto s = longest_suffix(w, {"sses", "ied", "ies", "us", "ss", "s"});
  if (s.empty()) return;
  std::size_t start = w.size() - s.size();
  if (s == "sses") {
    replace_suffix(w, s.size(), "ss");
  } else if (s == "ied" || s == "ies") {
    replace_suffix(w, s.size(), start >= 2 ? "i" : "ie");
  } else if (s == "s") {
    if (start >= 1 && has_vowel(w, 0, start - 1)) replace_suffix(w, 1, "");
  }
}

void step1b(std::string& w, const Regions& rg) {
  auto s = longest_suffix(w, {"eed", "eedly", "ed", "edly", "ing", "ingly"});
  if (s.empty()) return;
  std::size_t start = w.size() - s.size();
  if (s == "eed" || s == "eedly") {
    if (start >= rg.r1) replace_suffix(w, s.size(), "ee");
    return;
  }
  if (!has_vowel(w, 0, start)) return;
  replace_suffix(w, s.size(), "");
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (is_double(w)) {
    w.pop_back();
  } else if (rg.r1 >= w.size() && short_syllable_at(w, w.size())) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  std::size_t n = w.size();
  if (n >= 3 && (w[n - 1] == 'y' || w[n - 1] == 'Y') && !is_vowel(w[n - 2])) {
    w[n - 1] = 'i';
  }
}

void step2(std::string& w, const Regions& rg) {
  auto s = longest_suffix(
      w, {"tional", "enci",  "anci",  "abli",    "entli",   "izer",    "ization", "ational",
          "ation",  "ator",  "alism", "aliti",   "alli",    "fulness", "ousli",   "ousness",
          "iveness", "iviti", "biliti", "bli",    "ogi",     "fulli",   "lessli",  "li"});
  if (s.empty()) return;
  std::size_t start = w.size() - s.size();
  if (start < rg.r1) return;
  if (s == "tional") replace_suffix(w, s.size(), "tion");
  else if (s == "enci") replace_suffix(w, s.size(), "ence");
  else if (s == "anci") replace_suffix(w, s.size(), "ance");
  else if (s == "abli") replace_suffix(w, s.size(), "able");
  else if (s == "entli") replace_suffix(w, s.size(), "ent");
  else if (s == "izer" || s == "ization") replace_suffix(w, s.size(), "ize");
  else if (s == "ational" || s == "ation" || s == "ator") replace_suffix(w, s.size(), "ate");
  else if (s == "alism" || s == "aliti" || s == "alli") replace_suffix(w, s.size(), "al");
  else if (s == "fulness" || s == "fulli") replace_suffix(w, s.size(), "ful");
  else if (s == "ousli" || s == "ousness") replace_suffix(w, s.size(), "ous");
  else if (s == "iveness" || s == "iviti") replace_suffix(w, s.size(), "ive");
  else if (s == "biliti" || s == "bli") replace_suffix(w, s.size(), "ble");
  else if (s == "lessli") replace_suffix(w, s.size(), "less");
  else if (s == "ogi") {
    if (start >= 1 && w[start - 1] == 'l') replace_suffix(w, s.size(), "og");
  } else if (s == "li") {
    if (start >= 1 && is_li_ending(w[start - 1])) replace_suffix(w, s.size(), "");
  }
}

void step3(std::string& w, const Regions& rg) {
  auto s = longest_suffix(w, {"tional", "ational", "alize", "icate", "iciti", "ical", "ful",
                              "ness", "ative"});
  if (s.empty()) return;
  std::size_t start = w.size() - s.size();
  if (start < rg.r1) return;
  if (s == "tional") replace_suffix(w, s.size(), "tion");
  else if (s == "ational") replace_suffix(w, s.size(), "ate");
  else if (s == "alize") replace_suffix(w, s.size(), "al");
  else if (s == "icate" || s == "iciti" || s == "ical") replace_suffix(w, s.size(), "ic");
  else if (s == "ful" || s == "ness") replace_suffix(w, s.size(), "");
  else if (s == "ative") {
    if (start >= rg.r2) replace_suffix(w, s.size(), "");
  }
}

void step4(std::string& w, const Regions& rg) {
  auto s = longest_suffix(w, {"al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
                              "ment", "ent", "ism", "ate", "iti", "ous", "ive", "ize", "ion"});
  if (s.empty()) return;
  std::size_t start = w.size() - s.size();
  if (start < rg.r2) return;
  if (s == "ion") {
    if (start >= 1 && (w[start - 1] == 's' || w[start - 1] == 't')) replace_suffix(w, 3, "");
  } else {
    replace_suffix(w, s.size(), "");
  }
}

void step5(std::string& w, const Regions& rg) {
  if (w.empty()) return;
  std::size_t start = w.size() - 1;
  if (w.back() == 'e') {
    if (start >= rg.r2 || (start >= rg.r1 && !short_syllable_at(w, start))) w.pop_back();
  } else if (w.back() == 'l') {
    if (start >= rg.r2 && start >= 1 && w[start - 1] == 'l') w.pop_back();
  }
}

}  // namespace

std::string stem(std::string_view word) {
  std::string w(word);
  if (w.size() <= 2) return w;
  if (const std::string* exceptional = exceptional_form(w)) return *exceptional;

  if (w.front() == '\'') w.erase(0, 1);
  if (!w.empty() && w.front() == 'y') w.front() = 'Y';
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == 'y' && is_vowel(w[i - 1])) w[i] = 'Y';
  }

  const Regions rg = mark_regions(w);
  step0(w);
  step1a(w);
  if (!is_invariant_after_1a(w)) {
    step1b(w, rg);
    step1c(w);
    step2(w, rg);
    step3(w, rg);
    step4(w, rg);
    step5(w, rg);
  }
  std::replace(w.begin(), w.end(), 'Y', 'y');
  return w;
}

}  // namespace remask
