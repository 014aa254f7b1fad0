#pragma once

// Rule-based sentence segmentation for Ancient and Modern Greek. Boundaries
// are placed after terminator characters followed by whitespace and a
// sentence-starting character, with a configurable abbreviation guard.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "agmg/normalizer.hpp"

namespace agmg {

struct SentenceSpan {
  std::size_t start = 0;  // codepoint offsets into the input
  std::size_t end = 0;
  std::string text;

  bool operator==(const SentenceSpan&) const = default;
};

struct SegmenterConfig {
  // Ano teleia is clause-level punctuation; treating it as a sentence
  // boundary is opt-in.
  bool ano_teleia_boundary = false;
  std::vector<std::string> abbreviations = {"π.χ.", "κ.λπ.", "κ.τ.λ.", "κ.ά.", "βλ.", "σελ.", "Σ.τ.Μ."};
};

std::vector<SentenceSpan> segment(std::string_view text, Side side, const SegmenterConfig& cfg = {});

// One abbreviation per line; blank lines and lines starting with '#' skipped.
std::vector<std::string> load_abbreviations(const std::string& path);

}  // namespace agmg
