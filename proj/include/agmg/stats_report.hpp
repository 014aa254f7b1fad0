#pragma once

// Corpus statistics and data-card rendering. Tokens are whitespace-separated
// items, so the numbers are reproducible on any corpus without a tokenizer.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "agmg/corpus_model.hpp"

namespace agmg {

struct CorpusStats {
  std::uint64_t sentences = 0;  // aligned rows; a row may hold several sentences per side
  std::uint64_t tokens_grc = 0;
  std::uint64_t tokens_ell = 0;
  double avg_tokens_grc = 0.0;
  double avg_tokens_ell = 0.0;
  std::map<Dialect, std::uint64_t> dialect_counts;
  std::map<Split, std::uint64_t> split_counts;
};

std::size_t count_tokens(std::string_view text);

CorpusStats compute_stats(const std::vector<SentencePair>& pairs,
                          const std::map<std::string, Split>* split_assignment = nullptr);

// Half-up rounding to two decimals, as displayed on the card.
double display_round2(double value);

struct DataCard {
  std::string text;
  nlohmann::ordered_json json;
};

DataCard render_data_card(const CorpusStats& stats);

}  // namespace agmg
