#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "remask/corpus.hpp"
#include "remask/masking.hpp"
#include "remask/pipeline.hpp"
#include "remask/unmask.hpp"

namespace remask {

/// One line of the masked-output file; the interchange point for generators.
struct MaskedRecord {
  std::string id;
  std::string source;
  std::string target;
  std::string masked_step1;
  std::string masked_step2;
  std::string masked_step3;
  std::vector<MaskSpan> spans;  // final spans, after Step 3
  std::vector<MaskSpan> spans_step1;
  std::vector<MaskSpan> spans_step2;
  std::optional<UnmaskTrace> trace;

  /// Masked token counts after step 1, 2 and 3.
  std::array<std::size_t, 3> mask_counts() const;
};

MaskedRecord to_record(const ObfuscationResult& result, const DomainSet& domains);
std::string record_to_json(const MaskedRecord& record);
/// Throws InputError on malformed lines.
MaskedRecord record_from_json(std::string_view line);

void write_records(const std::filesystem::path& path, const std::vector<MaskedRecord>& records);
std::string records_to_text(const std::vector<MaskedRecord>& records);
std::vector<MaskedRecord> load_records(const std::filesystem::path& path);
std::vector<MaskedRecord> parse_records(std::string_view contents);

}  // namespace remask
