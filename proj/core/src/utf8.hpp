#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace goldalign::detail {

/// Decodes the code point starting at `pos` and advances `pos` past it.
/// Throws InputError on malformed sequences, overlong forms, surrogates and
/// values above U+10FFFF.
char32_t decode_utf8(std::string_view text, std::size_t& pos);

/// Throws InputError unless `text` is well-formed UTF-8.
void validate_utf8(std::string_view text);

/// ASCII lowercase plus the Latin-1 capitals (U+00C0..U+00DE, excluding
/// U+00D7). Used for stoplist lookups only; surfaces are never folded.
std::string fold_case(std::string_view text);

}  // namespace goldalign::detail
