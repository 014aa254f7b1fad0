#pragma once

// Vocabulary adaptation for tokenizers that cannot resolve polytonic
// characters: discover corpus characters covered by no vocabulary piece,
// extend the vocabulary, and emit a transplant plan mapping each new token
// to its diacritic-stripped base token, for external training code to use
// when copying embedding rows.

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "agmg/error.hpp"
#include "json.hpp"

namespace agmg {

struct Vocabulary {
  std::vector<std::string> tokens;  // id == index; ids dense
  std::unordered_map<std::string, std::size_t> index;

  static Vocabulary from_tokens(std::vector<std::string> tokens);
  // One token per line, line number (0-based) == id.
  static Vocabulary from_piece_list(const std::string& path);
  // JSON object {"token": id, ...}; ids must be dense 0..n-1.
  static Vocabulary from_json_map(const std::string& path);

  bool contains(const std::string& token) const { return index.count(token) > 0; }
  std::size_t size() const { return tokens.size(); }
};

void write_piece_list(const Vocabulary& vocab, const std::string& path);

struct MissingChar {
  char32_t cp = 0;
  std::uint64_t count = 0;
};

// Characters (whitespace excluded) occurring in the corpus but in no
// vocabulary token, sorted by codepoint, with occurrence counts.
std::vector<MissingChar> discover_missing(const std::vector<std::string>& corpus, const Vocabulary& vocab);

struct TransplantEntry {
  std::string new_token;
  std::size_t new_id = 0;
  std::string source_token;
  std::size_t source_id = 0;
};

struct TransplantPlan {
  std::vector<TransplantEntry> entries;
  std::vector<std::string> unresolved;  // characters whose base is absent; not added
};

// Base lookup order: diacritic-stripped character, then its lowercase fold.
// Characters that resolve are appended with the next free id; the rest are
// recorded as unresolved and left out of the vocabulary.
std::pair<Vocabulary, TransplantPlan> extend_vocab(const Vocabulary& vocab,
                                                   const std::vector<MissingChar>& missing);

// JSONL: a summary record first, then one entry per line, then unresolved
// tokens. read_plan inverts write_plan.
void write_plan(const TransplantPlan& plan, const std::string& path);
TransplantPlan read_plan(const std::string& path);

}  // namespace agmg
