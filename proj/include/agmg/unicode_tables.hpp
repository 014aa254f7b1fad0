#pragma once

#include <cstddef>
#include <cstdint>

namespace agmg::uni::tables {

struct DecompEntry {
  char32_t cp;
  char32_t first;
  char32_t second;  // 0 for singleton decompositions
};

struct ComposeEntry {
  char32_t first;
  char32_t second;
  char32_t composite;
};

struct CccEntry {
  char32_t cp;
  std::uint8_t ccc;
};

struct LowerEntry {
  char32_t cp;
  char32_t lower;
};

struct Range {
  char32_t lo;
  char32_t hi;
};

extern const DecompEntry kDecomp[];
extern const std::size_t kDecompCount;
extern const ComposeEntry kCompose[];
extern const std::size_t kComposeCount;
extern const CccEntry kCcc[];
extern const std::size_t kCccCount;
extern const LowerEntry kLower[];
extern const std::size_t kLowerCount;

extern const Range kCatL[];
extern const std::size_t kCatLCount;
extern const Range kCatLu[];
extern const std::size_t kCatLuCount;
extern const Range kCatM[];
extern const std::size_t kCatMCount;
extern const Range kCatN[];
extern const std::size_t kCatNCount;
extern const Range kCatP[];
extern const std::size_t kCatPCount;
extern const Range kCatS[];
extern const std::size_t kCatSCount;
extern const Range kCatZ[];
extern const std::size_t kCatZCount;

}  // namespace agmg::uni::tables
