#include "agmg/corpus_model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include "agmg/unicode.hpp"

namespace agmg {
namespace {

using json = nlohmann::ordered_json;

constexpr std::array<std::string_view, 5> kDialectNames = {"Attic", "Ionic", "Doric", "HomericEpic",
                                                           "HellenisticKoine"};
constexpr std::array<std::string_view, 4> kSplitNames = {"train", "dev", "test", "stress"};

json meta_to_json(const Metadata& m) {
  json j;
  j["author"] = m.author;
  j["title"] = m.title;
  j["segment_index"] = m.segment_index;
  j["url"] = m.url;
  j["translator"] = m.translator;
  j["dialect"] = std::string(dialect_name(m.dialect));
  j["genre"] = m.genre;
  j["era"] = m.era;
  return j;
}

Metadata meta_from_json(const json& j) {
  Metadata m;
  if (!j.is_object()) throw Error("meta must be an object");
  m.author = j.value("author", "");
  m.title = j.value("title", "");
  if (j.contains("segment_index")) {
    if (!j["segment_index"].is_number_integer() || j["segment_index"].get<std::int64_t>() < 0)
      throw Error("meta.segment_index must be a non-negative integer");
    m.segment_index = j["segment_index"].get<std::uint64_t>();
  }
  m.url = j.value("url", "");
  m.translator = j.value("translator", "");
  if (!j.contains("dialect")) throw Error("meta.dialect is required");
  auto d = parse_dialect(j["dialect"].get<std::string>());
  if (!d) throw Error("unknown dialect \"" + j["dialect"].get<std::string>() + "\"");
  m.dialect = *d;
  m.genre = j.value("genre", "");
  m.era = j.value("era", "");
  return m;
}

std::string require_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) throw Error(std::string(key) + " must be a string");
  return j[key].get<std::string>();
}

void collect_extras(const json& j, std::initializer_list<std::string_view> known, json& extra) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool is_known = false;
    for (auto k : known)
      if (it.key() == k) is_known = true;
    if (!is_known) extra[it.key()] = it.value();
  }
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  return out;
}

// Strips an initial UTF-8 BOM from the first line only.
void strip_bom(std::string& line, std::size_t line_no) {
  if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string_view dialect_name(Dialect d) { return kDialectNames[static_cast<std::size_t>(d)]; }

std::optional<Dialect> parse_dialect(std::string_view name) {
  for (std::size_t i = 0; i < kDialectNames.size(); ++i)
    if (name == kDialectNames[i]) return static_cast<Dialect>(i);
  return std::nullopt;
}

std::string_view split_name(Split s) { return kSplitNames[static_cast<std::size_t>(s)]; }

std::optional<Split> parse_split(std::string_view name) {
  for (std::size_t i = 0; i < kSplitNames.size(); ++i)
    if (name == kSplitNames[i]) return static_cast<Split>(i);
  return std::nullopt;
}

json document_to_json(const Document& doc) {
  json j;
  j["id"] = doc.id;
  j["grc"] = uni::nfc(doc.grc);
  j["ell"] = uni::nfc(doc.ell);
  j["meta"] = meta_to_json(doc.meta);
  if (doc.prealigned) j["prealigned"] = true;
  for (auto it = doc.extra.begin(); it != doc.extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

Document document_from_json(const json& j) {
  Document doc;
  doc.id = require_string(j, "id");
  doc.grc = require_string(j, "grc");
  doc.ell = require_string(j, "ell");
  if (!j.contains("meta")) throw Error("meta is required");
  doc.meta = meta_from_json(j["meta"]);
  if (j.contains("prealigned")) {
    if (!j["prealigned"].is_boolean()) throw Error("prealigned must be a boolean");
    doc.prealigned = j["prealigned"].get<bool>();
  }
  collect_extras(j, {"id", "grc", "ell", "meta", "prealigned"}, doc.extra);
  return doc;
}

json pair_to_json(const SentencePair& pair) {
  json j;
  j["id"] = pair.id;
  j["grc"] = uni::nfc(pair.grc);
  j["ell"] = uni::nfc(pair.ell);
  j["meta"] = meta_to_json(pair.meta);
  j["block"] = {{"src_start", pair.block.src_start},
                {"src_len", pair.block.src_len},
                {"tgt_start", pair.block.tgt_start},
                {"tgt_len", pair.block.tgt_len}};
  j["score"] = pair.score;
  j["refined"] = pair.refined;
  for (auto it = pair.extra.begin(); it != pair.extra.end(); ++it) j[it.key()] = it.value();
  return j;
}

SentencePair pair_from_json(const json& j) {
  SentencePair p;
  p.id = require_string(j, "id");
  p.grc = require_string(j, "grc");
  p.ell = require_string(j, "ell");
  if (p.grc.empty() || p.ell.empty()) throw Error("pair sides must be non-empty");
  if (!j.contains("meta")) throw Error("meta is required");
  p.meta = meta_from_json(j["meta"]);
  if (!j.contains("block") || !j["block"].is_object()) throw Error("block is required");
  const json& b = j["block"];
  p.block.src_start = b.at("src_start").get<std::uint32_t>();
  p.block.src_len = b.at("src_len").get<std::uint32_t>();
  p.block.tgt_start = b.at("tgt_start").get<std::uint32_t>();
  p.block.tgt_len = b.at("tgt_len").get<std::uint32_t>();
  if (!j.contains("score") || !j["score"].is_number()) throw Error("score is required");
  p.score = j["score"].get<double>();
  if (!std::isfinite(p.score) || p.score < 0) throw Error("score must be finite and >= 0");
  p.refined = j.value("refined", false);
  collect_extras(j, {"id", "grc", "ell", "meta", "block", "score", "refined"}, p.extra);
  return p;
}

DocumentReadResult read_documents(const std::string& path) {
  auto in = open_input(path);
  DocumentReadResult result;
  std::map<std::tuple<std::string, std::string, std::string, std::uint64_t>, std::size_t> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_bom(line, line_no);
    strip_cr(line);
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      result.errors.push_back({line_no, "line " + std::to_string(line_no) + ": invalid JSON record"});
      continue;
    }
    try {
      Document doc = document_from_json(j);
      auto key = std::make_tuple(doc.meta.author, doc.meta.title, doc.meta.translator, doc.meta.segment_index);
      auto [it, inserted] = seen.emplace(key, line_no);
      if (!inserted) {
        result.errors.push_back({line_no, "line " + std::to_string(line_no) +
                                              ": duplicate segment_index for (author, title, translator); first at line " +
                                              std::to_string(it->second)});
        continue;
      }
      result.documents.push_back(std::move(doc));
    } catch (const Error& e) {
      result.errors.push_back({line_no, "line " + std::to_string(line_no) + ": " + e.what()});
    }
  }
  return result;
}

void write_documents(const std::vector<Document>& documents, const std::string& path) {
  auto out = open_output(path);
  for (const Document& d : documents) out << document_to_json(d).dump() << '\n';
  out.flush();
  if (!out) throw Error("write failed for " + path);
}

std::vector<SentencePair> read_pairs(const std::string& path) {
  auto in = open_input(path);
  std::vector<SentencePair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_bom(line, line_no);
    strip_cr(line);
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ParseError(path, line_no, "invalid JSON record");
    try {
      pairs.push_back(pair_from_json(j));
    } catch (const Error& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  return pairs;
}

void write_pairs(const std::vector<SentencePair>& pairs, const std::string& path) {
  auto out = open_output(path);
  for (const SentencePair& p : pairs) {
    if (p.grc.empty() || p.ell.empty()) throw Error("refusing to write pair with empty side: " + p.id);
    if (!std::isfinite(p.score) || p.score < 0) throw Error("refusing to write pair with invalid score: " + p.id);
    out << pair_to_json(p).dump() << '\n';
  }
  out.flush();
  if (!out) throw Error("write failed for " + path);
}

}  // namespace agmg
