#pragma once

// Deep cleaning and Unicode normalization for Ancient (polytonic) and
// Modern (monotonic) Greek text. All operations are pure and total.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace agmg {

enum class Side { Grc, Ell };

struct CleaningReport {
  std::uint64_t removed_markup_spans = 0;
  std::uint64_t removed_bracket_spans = 0;
  std::uint64_t removed_page_numbers = 0;
  std::uint64_t normalized_codepoints = 0;

  CleaningReport& operator+=(const CleaningReport& o) {
    removed_markup_spans += o.removed_markup_spans;
    removed_bracket_spans += o.removed_bracket_spans;
    removed_page_numbers += o.removed_page_numbers;
    normalized_codepoints += o.normalized_codepoints;
    return *this;
  }
};

struct DeepCleanConfig {
  // Editorial bracket spans are dropped with their content; this keeps the
  // content and drops only the bracket characters (restoration-style corpora).
  bool keep_bracket_content = false;
  // A parenthesized span is treated as a translator comment and removed when
  // it contains one of these markers.
  std::vector<std::string> translator_comment_markers = {"Σ.τ.Μ.", "Σ.τ.μ.", "ΣτΜ"};
  // A line is a page number when it holds only digits (plus punctuation)
  // and has at most this many digits.
  std::size_t page_number_max_digits = 6;
};

// Removes <...> tag spans and decodes &amp; &lt; &gt; &quot;. Everything
// else is preserved byte-for-byte.
std::string strip_markup(std::string_view text);
std::pair<std::string, std::uint64_t> strip_markup_counted(std::string_view text);

std::pair<std::string, CleaningReport> deep_clean(std::string_view text, Side side,
                                                  const DeepCleanConfig& cfg = {});

// Canonical NFC. Polytonic precomposed forms stay polytonic; oxia forms that
// are canonically equivalent to tonos forms become tonos, as NFC dictates.
std::string normalize_unicode(std::string_view text);

// Single-scalar diacritic stripping: canonical decomposition, marks removed,
// recomposed. Case is preserved; undecomposable characters map to themselves.
char32_t strip_diacritics(char32_t cp);
std::string strip_diacritics(std::string_view text);

// Collapses whitespace runs to single spaces and trims the ends.
std::string collapse_whitespace(std::string_view text);

}  // namespace agmg
