#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace uleval {

// Decodes UTF-8 into scalar values; ill-formed sequences become U+FFFD.
std::vector<char32_t> utf8_decode(std::string_view text);

std::string utf8_encode(const std::vector<char32_t>& codepoints);
void utf8_append(std::string& out, char32_t cp);

// Canonical composition (NFC). Tables are generated from the Unicode
// character database; Hangul composes algorithmically.
std::string nfc(std::string_view text);

// NFC followed by simple (one-to-one) lowercasing. Used wherever two texts
// are compared case-insensitively.
std::string fold_case(std::string_view text);

char32_t to_lower(char32_t cp);

// Strips leading/trailing ASCII whitespace only; interior text untouched.
std::string_view trim_ascii(std::string_view text);

std::uint8_t combining_class(char32_t cp);

}  // namespace uleval
