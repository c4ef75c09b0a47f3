#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace evir::detail {

// Decodes the UTF-8 sequence starting at `pos` and advances `pos` past it.
// Malformed bytes decode as U+FFFD and advance a single byte.
char32_t decode_utf8(std::string_view text, std::size_t& pos);

void append_utf8(std::string& out, char32_t cp);

// True when the codepoint belongs inside a token. ASCII letters and digits
// count; beyond ASCII this is a pragmatic approximation: everything except
// known punctuation, symbol and control ranges counts as a word character.
bool is_word_cp(char32_t cp);

// Lowercase mapping covering ASCII, Latin-1 Supplement, Latin Extended-A,
// Greek and Cyrillic. Other codepoints pass through unchanged.
char32_t to_lower_cp(char32_t cp);

}  // namespace evir::detail
