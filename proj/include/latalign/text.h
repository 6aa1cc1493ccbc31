#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace latalign {

/// Comparison form of a token: NFC, lowercase, with leading and trailing
/// `. , ? ! ; : " ( ) [ ]` removed. Internal apostrophes and hyphens survive.
/// May return an empty string (e.g. for a bare ".").
std::string ComparisonForm(std::string_view token);

bool IsValidUtf8(std::string_view text);

/// Splits on ASCII whitespace; never yields empty pieces.
std::vector<std::string_view> SplitWhitespace(std::string_view text);

/// Splits on `sep` keeping empty fields ("a||b" -> {"a", "", "b"}).
std::vector<std::string_view> SplitFields(std::string_view text, char sep);

/// True when the string has at least one lowercase letter (Unicode-aware).
bool HasLowercase(std::string_view utf8);

/// Number of code points, used for column padding.
std::size_t DisplayWidth(std::string_view utf8);

}  // namespace latalign
