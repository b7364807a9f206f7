#pragma once

#include <string>
#include <string_view>

namespace remask {

/// English Snowball ("Porter2") stemmer, the variant shipped by NLTK's
/// SnowballStemmer("english"). Expects a lowercase word; words of length
/// <= 2 are returned unchanged.
std::string stem(std::string_view word);

}  // namespace remask
