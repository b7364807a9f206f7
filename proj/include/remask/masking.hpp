#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "remask/corpus.hpp"

namespace remask {

inline constexpr std::string_view kDefaultMaskSentinel = "<m>";

enum class MaskStep { step1, step2 };

std::string_view to_string(MaskStep step);
MaskStep parse_mask_step(std::string_view text);

struct MaskSpan {
  std::size_t start = 0;
  std::size_t length = 1;
  MaskStep step = MaskStep::step1;
  double score = 0.0;  // m_a for step1, saliency for step2

  std::size_t end() const { return start + length; }
  bool contains(std::size_t pos) const { return pos >= start && pos < end(); }
  bool overlaps(std::size_t s, std::size_t len) const {
    return s < end() && start < s + len;
  }
  bool operator==(const MaskSpan&) const = default;
};

/// A document plus a set of non-overlapping mask spans kept sorted by start.
/// Holds a non-owning pointer to the document, which must outlive it.
class MaskedDocument {
 public:
  MaskedDocument(const Document& doc, DomainIndex source, DomainIndex target);

  const Document& doc() const { return *doc_; }
  DomainIndex source() const { return source_; }
  DomainIndex target() const { return target_; }
  const std::vector<MaskSpan>& spans() const { return spans_; }

  bool is_masked(std::size_t pos) const;
  bool overlaps_any(std::size_t start, std::size_t length) const;
  /// Index into spans() of the span covering `pos`, if any.
  std::optional<std::size_t> span_at(std::size_t pos) const;

  /// Throws std::invalid_argument on overlap or out-of-range spans.
  void add(const MaskSpan& span);
  void remove_span_at(std::size_t pos);

  std::size_t masked_token_count() const;
  /// Unmasked tokens in order; the input the domain scorer sees.
  std::vector<std::string> visible_tokens() const;
  /// Per-position mask flags.
  std::vector<bool> mask_flags() const;

 private:
  const Document* doc_;
  DomainIndex source_;
  DomainIndex target_;
  std::vector<MaskSpan> spans_;
};

/// Replaces masked positions with the sentinel (one per token) and joins with
/// single spaces. With `merge_consecutive`, runs of adjacent sentinels collapse.
std::string render(const std::vector<std::string>& tokens,
                   const std::vector<MaskSpan>& spans,
                   std::string_view sentinel = kDefaultMaskSentinel,
                   bool merge_consecutive = false);

/// Inverse of an unmerged render: recovers per-position mask flags by aligning
/// the rendered text against the original tokens. Returns nullopt if the text
/// does not align.
std::optional<std::vector<bool>> parse_rendered(std::string_view rendered,
                                                const std::vector<std::string>& tokens,
                                                std::string_view sentinel = kDefaultMaskSentinel);

/// Span sets compared as sets of masked token positions.
bool positions_subset(const std::vector<MaskSpan>& inner,
                      const std::vector<MaskSpan>& outer);

}  // namespace remask
