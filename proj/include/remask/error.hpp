#pragma once

#include <stdexcept>
#include <string>

namespace remask {

/// Bad or inconsistent input data (corpus, table, model, saliency files).
/// The CLI maps it to exit code 1.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration values or flag combinations. CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace remask
