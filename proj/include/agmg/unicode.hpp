#pragma once

// UTF-8 codec, canonical Unicode normalization (NFC/NFD) and character
// classification backed by generated tables. Invalid UTF-8 bytes decode to
// U+FFFD, so every function here is total.

#include <string>
#include <string_view>
#include <vector>

namespace agmg::uni {

std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

std::u32string nfd(std::u32string_view s);
std::u32string nfc(std::u32string_view s);
std::string nfc(std::string_view s);
std::string nfd_utf8(std::string_view s);

std::uint8_t combining_class(char32_t cp);
bool is_letter(char32_t cp);
bool is_upper(char32_t cp);
bool is_mark(char32_t cp);
bool is_number(char32_t cp);
bool is_punct(char32_t cp);
bool is_symbol(char32_t cp);
bool is_space(char32_t cp);  // Z* plus tab/newline/CR/FF/VT

char32_t to_lower(char32_t cp);
std::string to_lower(std::string_view s);

// Canonically decomposes, drops combining marks, recomposes. Characters
// without a decomposition map to themselves; case is preserved.
char32_t strip_marks(char32_t cp);
std::string strip_marks(std::string_view s);

}  // namespace agmg::uni
