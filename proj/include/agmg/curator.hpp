#pragma once

// Deduplication on normalized Modern Greek text, multi-reference handling,
// and leakage-safe split generation. Splits are assigned at excerpt-group
// granularity (same author/title/segment_index stays together) and groups
// sharing a dedup key are fused, so no key can appear in two splits.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "agmg/corpus_model.hpp"

namespace agmg {

struct SplitSpec {
  std::uint64_t train_pairs = 0;  // informational; Train receives the remainder
  std::uint64_t dev_pairs = 0;
  std::uint64_t test_pairs = 0;
  std::uint64_t stress_pairs = 0;
  std::set<Dialect> stress_dialects = {Dialect::Ionic, Dialect::Doric, Dialect::HomericEpic};
  // Per-dialect share of dev/test; empty means any non-stress dialect fits.
  std::map<Dialect, double> dev_test_proportions = {{Dialect::Attic, 0.65}, {Dialect::HellenisticKoine, 0.35}};
  std::uint64_t seed = 13;
};

SplitSpec split_spec_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json split_spec_to_json(const SplitSpec& spec);

// NFC, lowercase, punctuation stripped, whitespace collapsed. Equal keys
// define duplicates.
std::string dedup_key(std::string_view ell);

struct DropRecord {
  std::string id;
  std::string kept_id;
};

struct DedupResult {
  std::vector<SentencePair> kept;
  std::vector<DropRecord> dropped;
  std::set<std::string> multi_reference_ids;
};

DedupResult deduplicate(const std::vector<SentencePair>& pairs);

std::map<Split, std::vector<SentencePair>> make_splits(const std::vector<SentencePair>& pairs,
                                                       const SplitSpec& spec);

}  // namespace agmg
