#pragma once

// Shared data model and JSONL (de)serialization for excerpt-level documents
// and aligned sentence pairs. Records are UTF-8, one JSON object per line,
// text fields NFC-normalized on write. Unknown fields round-trip verbatim.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agmg/error.hpp"
#include "json.hpp"

namespace agmg {

enum class Dialect { Attic, Ionic, Doric, HomericEpic, HellenisticKoine };

constexpr std::array<Dialect, 5> kAllDialects = {Dialect::Attic, Dialect::Ionic, Dialect::Doric,
                                                 Dialect::HomericEpic, Dialect::HellenisticKoine};

std::string_view dialect_name(Dialect d);
std::optional<Dialect> parse_dialect(std::string_view name);

enum class Split { Train, Dev, Test, Stress };

constexpr std::array<Split, 4> kAllSplits = {Split::Train, Split::Dev, Split::Test, Split::Stress};

std::string_view split_name(Split s);
std::optional<Split> parse_split(std::string_view name);

struct Metadata {
  std::string author;
  std::string title;
  std::uint64_t segment_index = 0;
  std::string url;
  std::string translator;
  Dialect dialect = Dialect::Attic;
  std::string genre;
  std::string era;

  bool operator==(const Metadata&) const = default;
};

struct Document {
  std::string id;
  std::string grc;
  std::string ell;
  Metadata meta;
  bool prealigned = false;  // verse-indexed sources bypass embedding alignment
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  bool operator==(const Document&) const = default;
};

struct AlignmentBlock {
  std::uint32_t src_start = 0;
  std::uint32_t src_len = 0;
  std::uint32_t tgt_start = 0;
  std::uint32_t tgt_len = 0;
  double cost = 0.0;  // not serialized; pairs carry it as `score`

  bool operator==(const AlignmentBlock& o) const {
    return src_start == o.src_start && src_len == o.src_len && tgt_start == o.tgt_start && tgt_len == o.tgt_len;
  }
};

struct SentencePair {
  std::string id;
  std::string grc;
  std::string ell;
  Metadata meta;
  AlignmentBlock block;
  double score = 0.0;
  bool refined = false;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  bool operator==(const SentencePair&) const = default;
};

struct LineDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct DocumentReadResult {
  std::vector<Document> documents;
  std::vector<LineDiagnostic> errors;
};

// Returns documents in file order; malformed lines and duplicate
// (author, title, translator, segment_index) keys land in `errors`.
DocumentReadResult read_documents(const std::string& path);

void write_documents(const std::vector<Document>& documents, const std::string& path);

std::vector<SentencePair> read_pairs(const std::string& path);
void write_pairs(const std::vector<SentencePair>& pairs, const std::string& path);

nlohmann::ordered_json document_to_json(const Document& doc);
Document document_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json pair_to_json(const SentencePair& pair);
SentencePair pair_from_json(const nlohmann::ordered_json& j);

}  // namespace agmg
