#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace remask {

// Lowercases ASCII letters, splits on whitespace, and emits every ASCII
// punctuation character as its own token. Bytes >= 0x80 are word characters,
// so UTF-8 sequences stay inside their word.
std::vector<std::string> tokenize(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace remask
