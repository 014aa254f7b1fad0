#include "agmg/segmenter.hpp"

#include <fstream>

#include "agmg/error.hpp"
#include "agmg/unicode.hpp"

namespace agmg {
namespace {

bool is_terminator(char32_t cp, const SegmenterConfig& cfg) {
  switch (cp) {
    case U'.': case U'!': case U'…':
    case U';': case U';':  // Greek question mark, both encodings
      return true;
    case U'·': case U'·':  // ano teleia / middle dot
      return cfg.ano_teleia_boundary;
    default:
      return false;
  }
}

bool is_closer(char32_t cp) {
  switch (cp) {
    case U'»': case U'"': case U'\'': case U')': case U']':
    case U'’': case U'”':
      return true;
    default:
      return false;
  }
}

bool is_sentence_start(char32_t cp) {
  switch (cp) {
    case U'«': case U'"': case U'\'': case U'(': case U'[':
    case U'‘': case U'“': case U'—': case U'-':
      return true;
    default:
      return uni::is_letter(cp) || uni::is_number(cp);
  }
}

// The token ending at `dot_pos` (inclusive), i.e. back to the previous
// whitespace, matches an abbreviation when it ends with one and the match is
// not a suffix of a longer word.
bool ends_with_abbreviation(const std::u32string& s, std::size_t dot_pos,
                            const std::vector<std::u32string>& abbrevs) {
  std::size_t tok_start = dot_pos + 1;
  while (tok_start > 0 && !uni::is_space(s[tok_start - 1])) --tok_start;
  std::u32string token = s.substr(tok_start, dot_pos + 1 - tok_start);
  for (const auto& a : abbrevs) {
    if (a.empty() || token.size() < a.size()) continue;
    if (token.compare(token.size() - a.size(), a.size(), a) != 0) continue;
    if (token.size() == a.size() || !uni::is_letter(token[token.size() - a.size() - 1])) return true;
  }
  return false;
}

}  // namespace

std::vector<SentenceSpan> segment(std::string_view text, Side side, const SegmenterConfig& cfg) {
  (void)side;
  std::u32string s = uni::decode_utf8(text);
  std::vector<std::u32string> abbrevs;
  abbrevs.reserve(cfg.abbreviations.size());
  for (const auto& a : cfg.abbreviations) abbrevs.push_back(uni::decode_utf8(a));

  std::vector<SentenceSpan> spans;
  std::size_t i = 0;
  auto skip_space = [&](std::size_t p) {
    while (p < s.size() && uni::is_space(s[p])) ++p;
    return p;
  };

  i = skip_space(0);
  std::size_t sent_start = i;
  while (i < s.size()) {
    char32_t cp = s[i];
    if (!is_terminator(cp, cfg)) {
      ++i;
      continue;
    }
    if (cp == U'.' && ends_with_abbreviation(s, i, abbrevs)) {
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    while (end < s.size() && is_closer(s[end])) ++end;
    std::size_t next = skip_space(end);
    bool at_eot = next == s.size();
    bool boundary = next > end && (at_eot || is_sentence_start(s[next]));
    if (at_eot && next == end) boundary = true;  // terminator at end of text
    if (!boundary) {
      i = end;
      continue;
    }
    if (end > sent_start) {
      spans.push_back({sent_start, end, uni::encode_utf8(s.substr(sent_start, end - sent_start))});
    }
    i = next;
    sent_start = next;
  }
  // Trailing material without a final terminator.
  std::size_t tail_end = s.size();
  while (tail_end > sent_start && uni::is_space(s[tail_end - 1])) --tail_end;
  if (tail_end > sent_start) {
    spans.push_back({sent_start, tail_end, uni::encode_utf8(s.substr(sent_start, tail_end - sent_start))});
  }
  return spans;
}

std::vector<std::string> load_abbreviations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open abbreviation list " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace agmg
