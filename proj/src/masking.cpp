#include "remask/masking.hpp"

#include <algorithm>
#include <stdexcept>

#include "remask/error.hpp"

namespace remask {

std::string_view to_string(MaskStep step) {
  return step == MaskStep::step1 ? "step1" : "step2";
}

MaskStep parse_mask_step(std::string_view text) {
  if (text == "step1") return MaskStep::step1;
  if (text == "step2") return MaskStep::step2;
  throw InputError("unknown mask step '" + std::string(text) + "'");
}

MaskedDocument::MaskedDocument(const Document& doc, DomainIndex source, DomainIndex target)
    : doc_(&doc), source_(source), target_(target) {}

std::optional<std::size_t> MaskedDocument::span_at(std::size_t pos) const {
  auto it = std::upper_bound(spans_.begin(), spans_.end(), pos,
                             [](std::size_t p, const MaskSpan& s) { return p < s.start; });
  if (it == spans_.begin()) return std::nullopt;
  --it;
  if (!it->contains(pos)) return std::nullopt;
  return static_cast<std::size_t>(it - spans_.begin());
}

bool MaskedDocument::is_masked(std::size_t pos) const { return span_at(pos).has_value(); }

bool MaskedDocument::overlaps_any(std::size_t start, std::size_t length) const {
  for (const auto& s : spans_) {
    if (s.start >= start + length) break;
    if (s.overlaps(start, length)) return true;
  }
  return false;
}

void MaskedDocument::add(const MaskSpan& span) {
  if (span.length == 0 || span.end() > doc_->size()) {
    throw std::invalid_argument("mask span out of range");
  }
  if (overlaps_any(span.start, span.length)) {
    throw std::invalid_argument("mask span overlaps an existing span");
  }
  auto it = std::lower_bound(spans_.begin(), spans_.end(), span.start,
                             [](const MaskSpan& s, std::size_t p) { return s.start < p; });
  spans_.insert(it, span);
}

void MaskedDocument::remove_span_at(std::size_t pos) {
  auto idx = span_at(pos);
  if (!idx) throw std::invalid_argument("position " + std::to_string(pos) + " is not masked");
  spans_.erase(spans_.begin() + static_cast<std::ptrdiff_t>(*idx));
}

std::size_t MaskedDocument::masked_token_count() const {
  std::size_t n = 0;
  for (const auto& s : spans_) n += s.length;
  return n;
}

std::vector<bool> MaskedDocument::mask_flags() const {
  std::vector<bool> flags(doc_->size(), false);
  for (const auto& s : spans_) {
    for (std::size_t p = s.start; p < s.end(); ++p) flags[p] = true;
  }
  return flags;
}

std::vector<std::string> MaskedDocument::visible_tokens() const {
  std::vector<std::string> out;
  out.reserve(doc_->size() - masked_token_count());
  std::size_t next = 0;
  for (const auto& s : spans_) {
    for (; next < s.start; ++next) out.push_back(doc_->tokens[next]);
    next = s.end();
  }
  for (; next < doc_->size(); ++next) out.push_back(doc_->tokens[next]);
  return out;
}

std::string render(const std::vector<std::string>& tokens, const std::vector<MaskSpan>& spans,
                   std::string_view sentinel, bool merge_consecutive) {
  std::vector<bool> masked(tokens.size(), false);
  for (const auto& s : spans) {
    for (std::size_t p = s.start; p < s.end() && p < tokens.size(); ++p) masked[p] = true;
  }
  std::string out;
  bool first = true;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (masked[i] && merge_consecutive && i > 0 && masked[i - 1]) continue;
    if (!first) out.push_back(' ');
    first = false;
    if (masked[i]) {
      out += sentinel;
    } else {
      out += tokens[i];
    }
  }
  return out;
}

std::optional<std::vector<bool>> parse_rendered(std::string_view rendered,
                                                const std::vector<std::string>& tokens,
                                                std::string_view sentinel) {
  std::vector<bool> flags;
  flags.reserve(tokens.size());
  std::size_t pos = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (pos > rendered.size()) return std::nullopt;
    std::size_t end = rendered.find(' ', pos);
    if (end == std::string_view::npos) end = rendered.size();
    std::string_view piece = rendered.substr(pos, end - pos);
    // A sentinel string that is also the original token is read as unmasked.
    if (piece == tokens[i]) {
      flags.push_back(false);
    } else if (piece == sentinel) {
      flags.push_back(true);
    } else {
      return std::nullopt;
    }
    pos = end + 1;
    ++i;
  }
  if (pos < rendered.size() || (tokens.empty() && !rendered.empty())) return std::nullopt;
  return flags;
}

bool positions_subset(const std::vector<MaskSpan>& inner, const std::vector<MaskSpan>& outer) {
  for (const auto& s : inner) {
    for (std::size_t p = s.start; p < s.end(); ++p) {
      bool covered = std::any_of(outer.begin(), outer.end(),
                                 [p](const MaskSpan& o) { return o.contains(p); });
      if (!covered) return false;
    }
  }
  return true;
}

}  // namespace remask
