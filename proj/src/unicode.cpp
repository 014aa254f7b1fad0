#include "agmg/unicode.hpp"

#include <algorithm>

#include "agmg/unicode_tables.hpp"

namespace agmg::uni {
namespace {

using namespace tables;

constexpr char32_t kReplacement = 0xFFFD;

// Hangul syllable composition constants (UAX #15 §3.12).
constexpr char32_t kSBase = 0xAC00, kLBase = 0x1100, kVBase = 0x1161, kTBase = 0x11A7;
constexpr int kLCount = 19, kVCount = 21, kTCount = 28;
constexpr int kNCount = kVCount * kTCount;
constexpr int kSCount = kLCount * kNCount;

const DecompEntry* find_decomp(char32_t cp) {
  auto* end = kDecomp + kDecompCount;
  auto* it = std::lower_bound(kDecomp, end, cp, [](const DecompEntry& e, char32_t c) { return e.cp < c; });
  return (it != end && it->cp == cp) ? it : nullptr;
}

char32_t find_composite(char32_t a, char32_t b) {
  auto* end = kCompose + kComposeCount;
  auto key = std::pair<char32_t, char32_t>{a, b};
  auto* it = std::lower_bound(kCompose, end, key, [](const ComposeEntry& e, const std::pair<char32_t, char32_t>& k) {
    return e.first != k.first ? e.first < k.first : e.second < k.second;
  });
  return (it != end && it->first == a && it->second == b) ? it->composite : 0;
}

bool in_ranges(const Range* ranges, std::size_t n, char32_t cp) {
  auto* end = ranges + n;
  auto* it = std::upper_bound(ranges, end, cp, [](char32_t c, const Range& r) { return c < r.lo; });
  return it != ranges && cp <= (it - 1)->hi;
}

void decompose_cp(char32_t cp, std::u32string& out) {
  if (cp >= kSBase && cp < kSBase + kSCount) {
    int idx = static_cast<int>(cp - kSBase);
    out.push_back(kLBase + idx / kNCount);
    out.push_back(kVBase + (idx % kNCount) / kTCount);
    if (int t = idx % kTCount; t != 0) out.push_back(kTBase + t);
    return;
  }
  if (const DecompEntry* d = find_decomp(cp)) {
    decompose_cp(d->first, out);
    if (d->second != 0) decompose_cp(d->second, out);
    return;
  }
  out.push_back(cp);
}

void canonical_order(std::u32string& s) {
  // Stable bubble pass over combining marks; runs are short in practice.
  for (std::size_t i = 1; i < s.size(); ++i) {
    std::uint8_t cc = combining_class(s[i]);
    if (cc == 0) continue;
    std::size_t j = i;
    while (j > 0 && combining_class(s[j - 1]) > cc) {
      std::swap(s[j - 1], s[j]);
      --j;
    }
  }
}

}  // namespace

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  const auto* p = reinterpret_cast<const unsigned char*>(s.data());
  while (i < s.size()) {
    unsigned char b = p[i];
    if (b < 0x80) {
      out.push_back(b);
      ++i;
      continue;
    }
    int len = b >= 0xF0 ? 4 : b >= 0xE0 ? 3 : b >= 0xC0 ? 2 : 0;
    if (len == 0 || i + len > s.size()) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    char32_t cp = b & (0xFF >> (len + 1));
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      unsigned char c = p[i + k];
      if ((c & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (c & 0x3F);
    }
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (!ok || cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = kReplacement;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode_utf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 2);
  for (char32_t cp : s) append_utf8(out, cp);
  return out;
}

std::uint8_t combining_class(char32_t cp) {
  auto* end = kCcc + kCccCount;
  auto* it = std::lower_bound(kCcc, end, cp, [](const CccEntry& e, char32_t c) { return e.cp < c; });
  return (it != end && it->cp == cp) ? it->ccc : 0;
}

std::u32string nfd(std::u32string_view s) {
  std::u32string out;
  out.reserve(s.size() + s.size() / 4);
  for (char32_t cp : s) decompose_cp(cp, out);
  canonical_order(out);
  return out;
}

std::u32string nfc(std::u32string_view s) {
  std::u32string d = nfd(s);
  if (d.empty()) return d;
  std::u32string out;
  out.reserve(d.size());
  std::ptrdiff_t starter = -1;
  for (char32_t cp : d) {
    std::uint8_t cc = combining_class(cp);
    if (starter >= 0) {
      bool last_is_starter = static_cast<std::size_t>(starter) == out.size() - 1;
      std::uint8_t prev_cc = last_is_starter ? 0 : combining_class(out.back());
      // cp composes with the starter unless a char of ccc >= ccc(cp) blocks it;
      // the NFD sequence is canonically ordered, so checking out.back() suffices.
      if (last_is_starter || prev_cc < cc) {
        char32_t st = out[static_cast<std::size_t>(starter)];
        char32_t composite = 0;
        if (st >= kLBase && st < kLBase + kLCount && cp >= kVBase && cp < kVBase + kVCount && last_is_starter) {
          composite = kSBase + ((st - kLBase) * kVCount + (cp - kVBase)) * kTCount;
        } else if (st >= kSBase && st < kSBase + kSCount && (st - kSBase) % kTCount == 0 && cp > kTBase &&
                   cp < kTBase + kTCount && last_is_starter) {
          composite = st + (cp - kTBase);
        } else {
          composite = find_composite(st, cp);
        }
        if (composite != 0) {
          out[static_cast<std::size_t>(starter)] = composite;
          continue;
        }
      }
    }
    out.push_back(cp);
    if (cc == 0) starter = static_cast<std::ptrdiff_t>(out.size()) - 1;
  }
  return out;
}

std::string nfc(std::string_view s) { return encode_utf8(nfc(decode_utf8(s))); }

std::string nfd_utf8(std::string_view s) { return encode_utf8(nfd(decode_utf8(s))); }

bool is_letter(char32_t cp) { return in_ranges(kCatL, kCatLCount, cp); }
bool is_upper(char32_t cp) { return in_ranges(kCatLu, kCatLuCount, cp); }
bool is_mark(char32_t cp) { return in_ranges(kCatM, kCatMCount, cp); }
bool is_number(char32_t cp) { return in_ranges(kCatN, kCatNCount, cp); }
bool is_punct(char32_t cp) { return in_ranges(kCatP, kCatPCount, cp); }
bool is_symbol(char32_t cp) { return in_ranges(kCatS, kCatSCount, cp); }

bool is_space(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || in_ranges(kCatZ, kCatZCount, cp);
}

char32_t to_lower(char32_t cp) {
  auto* end = kLower + kLowerCount;
  auto* it = std::lower_bound(kLower, end, cp, [](const LowerEntry& e, char32_t c) { return e.cp < c; });
  return (it != end && it->cp == cp) ? it->lower : cp;
}

std::string to_lower(std::string_view s) {
  std::u32string u = decode_utf8(s);
  for (char32_t& c : u) c = to_lower(c);
  return encode_utf8(u);
}

char32_t strip_marks(char32_t cp) {
  std::u32string d = nfd(std::u32string(1, cp));
  std::u32string kept;
  for (char32_t c : d)
    if (!is_mark(c)) kept.push_back(c);
  if (kept.empty()) return cp;
  std::u32string c = nfc(kept);
  return c.size() == 1 ? c[0] : kept[0];
}

std::string strip_marks(std::string_view s) {
  std::u32string u = decode_utf8(s);
  std::u32string kept;
  kept.reserve(u.size());
  for (char32_t cp : u) {
    std::u32string d = nfd(std::u32string(1, cp));
    for (char32_t c : d)
      if (!is_mark(c)) kept.push_back(c);
  }
  return encode_utf8(nfc(kept));
}

}  // namespace agmg::uni
