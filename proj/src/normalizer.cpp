#include "agmg/normalizer.hpp"

#include <algorithm>

#include "agmg/unicode.hpp"

namespace agmg {
namespace {

bool tag_starts_at(std::string_view s, std::size_t i) {
  if (i + 1 >= s.size()) return false;
  char c = s[i + 1];
  return std::isalpha(static_cast<unsigned char>(c)) || c == '/' || c == '!' || c == '?';
}

struct BracketClass {
  char32_t open;
  char32_t close;
};

constexpr BracketClass kEditorialBrackets[] = {
    {U'[', U']'}, {U'{', U'}'}, {U'⟨', U'⟩'}, {U'〈', U'〉'}};

const BracketClass* bracket_class(char32_t cp) {
  for (const auto& b : kEditorialBrackets)
    if (b.open == cp) return &b;
  return nullptr;
}

char32_t canonical_punct(char32_t cp) {
  switch (cp) {
    case U'‘': case U'’': case U'‚': case U'ʼ':
      return U'\'';
    case U'“': case U'”': case U'„':
      return U'"';
    case U'–': case U'—': case U'―':
      return U'-';
    default:
      return cp;
  }
}

bool contains_marker(const std::u32string& span, const std::vector<std::string>& markers) {
  std::string utf8 = uni::encode_utf8(span);
  for (const auto& m : markers)
    if (!m.empty() && utf8.find(m) != std::string::npos) return true;
  return false;
}

bool is_page_number_line(const std::u32string& line, std::size_t max_digits) {
  std::size_t digits = 0;
  for (char32_t cp : line) {
    if (uni::is_space(cp)) continue;
    if (cp >= U'0' && cp <= U'9') {
      ++digits;
      continue;
    }
    if (uni::is_punct(cp)) continue;
    return false;
  }
  return digits >= 1 && digits <= max_digits;
}

}  // namespace

std::pair<std::string, std::uint64_t> strip_markup_counted(std::string_view text) {
  std::string no_tags;
  no_tags.reserve(text.size());
  std::uint64_t spans = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '<' && tag_starts_at(text, i)) {
      std::size_t close = text.find_first_of("<>", i + 1);
      if (close != std::string_view::npos && text[close] == '>') {
        ++spans;
        i = close + 1;
        continue;
      }
    }
    no_tags.push_back(text[i]);
    ++i;
  }

  std::string out;
  out.reserve(no_tags.size());
  for (std::size_t k = 0; k < no_tags.size();) {
    if (no_tags[k] == '&') {
      static constexpr std::pair<std::string_view, char> kEntities[] = {
          {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}};
      bool matched = false;
      for (const auto& [ent, ch] : kEntities) {
        if (no_tags.compare(k, ent.size(), ent) == 0) {
          out.push_back(ch);
          k += ent.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    out.push_back(no_tags[k]);
    ++k;
  }
  return {out, spans};
}

std::string strip_markup(std::string_view text) { return strip_markup_counted(text).first; }

std::pair<std::string, CleaningReport> deep_clean(std::string_view text, Side side, const DeepCleanConfig& cfg) {
  (void)side;  // cleaning rules are currently side-independent
  CleaningReport report;
  std::u32string s = uni::decode_utf8(text);

  // Editorial brackets, innermost-first via a rescan after each removal.
  std::u32string pruned;
  pruned.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const BracketClass* bc = bracket_class(s[i]);
    if (bc != nullptr) {
      int depth = 1;
      std::size_t j = i + 1;
      while (j < s.size() && depth > 0) {
        if (s[j] == bc->open) ++depth;
        if (s[j] == bc->close) --depth;
        ++j;
      }
      if (depth == 0) {
        ++report.removed_bracket_spans;
        if (cfg.keep_bracket_content) {
          pruned.append(s, i + 1, j - i - 2);
        }
        i = j;
        continue;
      }
    }
    pruned.push_back(s[i]);
    ++i;
  }

  // Parenthesized translator comments.
  std::u32string no_comments;
  no_comments.reserve(pruned.size());
  for (std::size_t i = 0; i < pruned.size();) {
    if (pruned[i] == U'(') {
      std::size_t j = pruned.find(U')', i + 1);
      if (j != std::u32string::npos) {
        std::u32string span = pruned.substr(i + 1, j - i - 1);
        if (contains_marker(span, cfg.translator_comment_markers)) {
          ++report.removed_bracket_spans;
          i = j + 1;
          continue;
        }
      }
    }
    no_comments.push_back(pruned[i]);
    ++i;
  }

  // Standalone page-number lines.
  std::u32string no_pages;
  no_pages.reserve(no_comments.size());
  std::size_t line_start = 0;
  for (std::size_t i = 0; i <= no_comments.size(); ++i) {
    if (i == no_comments.size() || no_comments[i] == U'\n') {
      std::u32string line = no_comments.substr(line_start, i - line_start);
      if (is_page_number_line(line, cfg.page_number_max_digits)) {
        ++report.removed_page_numbers;
      } else {
        no_pages += line;
        if (i != no_comments.size()) no_pages.push_back(U'\n');
      }
      line_start = i + 1;
    }
  }

  for (char32_t& cp : no_pages) {
    char32_t canon = canonical_punct(cp);
    if (canon != cp) {
      cp = canon;
      ++report.normalized_codepoints;
    }
  }

  // Whitespace collapse, trimming the ends.
  std::u32string collapsed;
  collapsed.reserve(no_pages.size());
  bool pending_space = false;
  for (char32_t cp : no_pages) {
    if (uni::is_space(cp)) {
      pending_space = !collapsed.empty();
      continue;
    }
    if (pending_space) collapsed.push_back(U' ');
    pending_space = false;
    collapsed.push_back(cp);
  }

  return {uni::encode_utf8(collapsed), report};
}

std::string normalize_unicode(std::string_view text) { return uni::nfc(text); }

char32_t strip_diacritics(char32_t cp) { return uni::strip_marks(cp); }

std::string strip_diacritics(std::string_view text) { return uni::strip_marks(text); }

std::string collapse_whitespace(std::string_view text) {
  std::u32string s = uni::decode_utf8(text);
  std::u32string out;
  out.reserve(s.size());
  bool pending = false;
  for (char32_t cp : s) {
    if (uni::is_space(cp)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(U' ');
    pending = false;
    out.push_back(cp);
  }
  return uni::encode_utf8(out);
}

}  // namespace agmg
