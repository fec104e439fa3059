#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace scribe::text {

// Number of Unicode code points in a UTF-8 string.
std::size_t codePoints(std::string_view utf8);

std::string toNfc(std::string_view utf8);
bool isNfc(std::string_view utf8);

// Title-cases the first code point.
std::string capitalizeFirst(std::string_view utf8);
std::string lowercaseFirst(std::string_view utf8);

// True when the first letter is a vowel (base letter after NFD, so "è" counts).
bool startsWithVowel(std::string_view utf8);

}  // namespace scribe::text
