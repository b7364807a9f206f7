#include "remask/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "remask/error.hpp"

namespace remask {

std::string_view to_string(Ablation ablation) {
  switch (ablation) {
    case Ablation::none:
      return "none";
    case Ablation::no_init:
      return "no-init";
    case Ablation::no_unmask:
      return "no-unmask";
    case Ablation::no_ott:
      return "no-ott";
  }
  return "none";
}

Ablation parse_ablation(std::string_view text) {
  std::string t;
  for (char c : text) {
    if (c == '-' || c == '_') continue;
    t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (t == "none") return Ablation::none;
  if (t == "noinit") return Ablation::no_init;
  if (t == "nounmask") return Ablation::no_unmask;
  if (t == "noott") return Ablation::no_ott;
  throw ConfigError("unknown ablation '" + std::string(text) + "'");
}

void PipelineConfig::validate() const {
  if (!(tau1 > 0.0) || !std::isfinite(tau1)) throw ConfigError("tau1 must be > 0");
  if (!(tau3 > 0.0 && tau3 < 1.0)) throw ConfigError("tau3 must lie in (0, 1)");
  if (tau2.kind == Tau2Policy::Kind::quantile) {
    if (!(tau2.value > 0.0 && tau2.value < 1.0)) {
      throw ConfigError("tau2 quantile must lie in (0, 1)");
    }
  } else if (!std::isfinite(tau2.value)) {
    throw ConfigError("tau2 must be finite");
  }
  if (max_tokens == 0) throw ConfigError("max-tokens must be > 0");
  if (mask_sentinel.empty() || mask_sentinel.find(' ') != std::string::npos) {
    throw ConfigError("mask sentinel must be non-empty and contain no spaces");
  }
  if (saliency_provider != SaliencyProvider::occlusion && !saliency_file) {
    throw ConfigError("external saliency provider requires a saliency file");
  }
  affinity_config().validate();
}

AffinityConfig PipelineConfig::affinity_config() const {
  AffinityConfig c;
  c.smoothing = smoothing;
  c.min_doc_freq = min_doc_freq;
  c.orders = ngram_orders;
  return c;
}

}  // namespace remask

namespace remask {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(std::string_view key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(key) + ": expected a number, got '" + value + "'");
  }
}

std::uint64_t to_unsigned(std::string_view key, const std::string& value) {
  if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + value + "'");
  }
  try {
    return std::stoull(value);
  } catch (const std::exception&) {
    throw ConfigError(std::string(key) + ": integer out of range");
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    auto end = value.find(',', pos);
    if (end == std::string::npos) end = value.size();
    out.push_back(trim(std::string_view(value).substr(pos, end - pos)));
    pos = end + 1;
  }
  return out;
}

bool to_bool(std::string_view key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ConfigError(std::string(key) + ": expected a boolean, got '" + value + "'");
}

std::string format_double(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

}  // namespace

void apply_config_value(PipelineConfig& c, std::string_view raw_key, std::string_view raw_value) {
  std::string key = trim(raw_key);
  std::replace(key.begin(), key.end(), '_', '-');
  const std::string value = trim(raw_value);
  if (key == "tau1") {
    c.tau1 = to_double(key, value);
  } else if (key == "tau2") {
    c.tau2 = Tau2Policy::absolute(to_double(key, value));
  } else if (key == "tau2-quantile") {
    c.tau2 = Tau2Policy::quantile(to_double(key, value));
  } else if (key == "tau3") {
    c.tau3 = to_double(key, value);
  } else if (key == "saliency") {
    try {
      c.saliency_provider = parse_saliency_provider(value);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  } else if (key == "saliency-file") {
    c.saliency_file = value;
    if (c.saliency_provider == SaliencyProvider::occlusion) {
      c.saliency_provider = SaliencyProvider::external_attention_norm;
    }
  } else if (key == "unmask-strategy") {
    c.unmask_strategy = parse_unmask_strategy(value);
  } else if (key == "ngram-orders") {
    c.ngram_orders.clear();
    for (const auto& item : split_list(value)) {
      c.ngram_orders.push_back(static_cast<std::size_t>(to_unsigned(key, item)));
    }
  } else if (key == "smoothing") {
    auto items = split_list(value);
    if (items.size() != 3) throw ConfigError("smoothing: expected three comma-separated values");
    for (std::size_t i = 0; i < 3; ++i) c.smoothing[i] = to_double(key, items[i]);
  } else if (key == "min-doc-freq") {
    c.min_doc_freq = static_cast<std::size_t>(to_unsigned(key, value));
  } else if (key == "max-tokens") {
    c.max_tokens = static_cast<std::size_t>(to_unsigned(key, value));
  } else if (key == "mask-sentinel") {
    c.mask_sentinel = value;
  } else if (key == "merge-consecutive") {
    c.merge_consecutive = to_bool(key, value);
  } else if (key == "ablation") {
    c.ablation = parse_ablation(value);
  } else if (key == "seed") {
    c.seed = to_unsigned(key, value);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

PipelineConfig parse_config_text(std::string_view text, PipelineConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      apply_config_value(base, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

PipelineConfig load_config_file(const std::filesystem::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), std::move(base));
}

std::string config_to_text(const PipelineConfig& c) {
  std::ostringstream out;
  out << "tau1 = " << format_double(c.tau1) << '\n';
  if (c.tau2.kind == Tau2Policy::Kind::absolute) {
    out << "tau2 = " << format_double(c.tau2.value) << '\n';
  } else {
    out << "tau2-quantile = " << format_double(c.tau2.value) << '\n';
  }
  out << "tau3 = " << format_double(c.tau3) << '\n';
  out << "saliency = " << to_string(c.saliency_provider) << '\n';
  if (c.saliency_file) out << "saliency-file = " << *c.saliency_file << '\n';
  out << "unmask-strategy = " << to_string(c.unmask_strategy) << '\n';
  out << "ngram-orders = ";
  for (std::size_t i = 0; i < c.ngram_orders.size(); ++i) out << (i ? "," : "") << c.ngram_orders[i];
  out << '\n';
  out << "smoothing = " << format_double(c.smoothing[0]) << ',' << format_double(c.smoothing[1])
      << ',' << format_double(c.smoothing[2]) << '\n';
  out << "min-doc-freq = " << c.min_doc_freq << '\n';
  out << "max-tokens = " << c.max_tokens << '\n';
  out << "mask-sentinel = " << c.mask_sentinel << '\n';
  out << "merge-consecutive = " << (c.merge_consecutive ? "true" : "false") << '\n';
  out << "ablation = " << to_string(c.ablation) << '\n';
  out << "seed = " << c.seed << '\n';
  return out.str();
}

}  // namespace remask
