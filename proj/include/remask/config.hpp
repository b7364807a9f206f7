#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "remask/affinity.hpp"
#include "remask/saliency.hpp"
#include "remask/unmask.hpp"

namespace remask {

enum class Ablation { none, no_init, no_unmask, no_ott };

std::string_view to_string(Ablation ablation);
/// Accepts "none", "no-init"/"no_init"/"noinit", etc. Throws ConfigError.
Ablation parse_ablation(std::string_view text);

struct PipelineConfig {
  double tau1 = 0.08;
  Tau2Policy tau2 = Tau2Policy::quantile(0.8);
  double tau3 = 0.4;
  SaliencyProvider saliency_provider = SaliencyProvider::occlusion;
  std::optional<std::string> saliency_file;
  UnmaskStrategy unmask_strategy = UnmaskStrategy::static_ascending;
  std::vector<std::size_t> ngram_orders{1, 2, 3};
  std::array<double, 3> smoothing{1.0, 5.0, 7.0};
  std::size_t min_doc_freq = 10;
  std::size_t max_tokens = 96;
  std::string mask_sentinel{kDefaultMaskSentinel};
  bool merge_consecutive = false;
  Ablation ablation = Ablation::none;
  std::uint64_t seed = 0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  AffinityConfig affinity_config() const;
};

/// Applies one `key=value` setting. Keys match the CLI flag names: tau1, tau2,
/// tau2-quantile, tau3, saliency, saliency-file, unmask-strategy, ngram-orders,
/// smoothing, min-doc-freq, max-tokens, mask-sentinel, merge-consecutive,
/// ablation, seed. Throws ConfigError for unknown keys or bad values.
void apply_config_value(PipelineConfig& config, std::string_view key, std::string_view value);

/// Parses `key = value` lines; '#' starts a comment.
PipelineConfig parse_config_text(std::string_view text, PipelineConfig base = {});
PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base = {});
std::string config_to_text(const PipelineConfig& config);

}  // namespace remask
