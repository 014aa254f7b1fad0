#include "agmg/vocab_adapter.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "agmg/unicode.hpp"

namespace agmg {
namespace {

using json = nlohmann::ordered_json;

}  // namespace

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary v;
  v.tokens = std::move(tokens);
  for (std::size_t i = 0; i < v.tokens.size(); ++i) {
    auto [it, inserted] = v.index.emplace(v.tokens[i], i);
    if (!inserted) throw Error("duplicate vocabulary token \"" + v.tokens[i] + "\"");
  }
  return v;
}

Vocabulary Vocabulary::from_piece_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vocabulary " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  // A trailing newline yields a spurious empty final piece; real empty
  // pieces mid-file are preserved.
  if (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
  return from_tokens(std::move(tokens));
}

Vocabulary Vocabulary::from_json_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vocabulary " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(path + ": expected a JSON object of token -> id");
  std::vector<std::string> tokens(j.size());
  std::vector<bool> seen(j.size(), false);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number_unsigned()) throw Error(path + ": id for \"" + it.key() + "\" must be a non-negative integer");
    std::size_t id = it.value().get<std::size_t>();
    if (id >= tokens.size()) throw Error(path + ": ids must be dense 0..n-1 (got " + std::to_string(id) + ")");
    if (seen[id]) throw Error(path + ": duplicate id " + std::to_string(id));
    seen[id] = true;
    tokens[id] = it.key();
  }
  return from_tokens(std::move(tokens));
}

void write_piece_list(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  for (const std::string& t : vocab.tokens) out << t << '\n';
  out.flush();
  if (!out) throw Error("write failed for " + path);
}

std::vector<MissingChar> discover_missing(const std::vector<std::string>& corpus, const Vocabulary& vocab) {
  std::set<char32_t> covered;
  for (const std::string& token : vocab.tokens)
    for (char32_t cp : uni::decode_utf8(token)) covered.insert(cp);

  std::map<char32_t, std::uint64_t> counts;
  for (const std::string& text : corpus) {
    for (char32_t cp : uni::decode_utf8(text)) {
      if (uni::is_space(cp) || covered.count(cp)) continue;
      ++counts[cp];
    }
  }
  std::vector<MissingChar> out;
  out.reserve(counts.size());
  for (const auto& [cp, count] : counts) out.push_back({cp, count});
  return out;
}

std::pair<Vocabulary, TransplantPlan> extend_vocab(const Vocabulary& vocab,
                                                   const std::vector<MissingChar>& missing) {
  Vocabulary extended = vocab;
  TransplantPlan plan;
  for (const MissingChar& mc : missing) {
    std::string token;
    uni::append_utf8(token, mc.cp);
    if (extended.contains(token)) throw Error("extend_vocab: \"" + token + "\" is already in the vocabulary");

    std::string base;
    uni::append_utf8(base, uni::strip_marks(mc.cp));
    std::string source;
    if (vocab.contains(base)) {
      source = base;
    } else {
      std::string lower;
      uni::append_utf8(lower, uni::to_lower(uni::strip_marks(mc.cp)));
      if (vocab.contains(lower)) source = lower;
    }
    if (source.empty()) {
      plan.unresolved.push_back(token);
      continue;
    }
    std::size_t new_id = extended.tokens.size();
    extended.tokens.push_back(token);
    extended.index.emplace(token, new_id);
    plan.entries.push_back({token, new_id, source, vocab.index.at(source)});
  }
  return {std::move(extended), std::move(plan)};
}

void write_plan(const TransplantPlan& plan, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  json summary;
  summary["type"] = "summary";
  summary["new_tokens"] = plan.entries.size();
  summary["unresolved"] = plan.unresolved.size();
  out << summary.dump() << '\n';
  for (const TransplantEntry& e : plan.entries) {
    json j;
    j["type"] = "entry";
    j["new_token"] = e.new_token;
    j["new_id"] = e.new_id;
    j["source_token"] = e.source_token;
    j["source_id"] = e.source_id;
    out << j.dump() << '\n';
  }
  for (const std::string& t : plan.unresolved) {
    json j;
    j["type"] = "unresolved";
    j["token"] = t;
    out << j.dump() << '\n';
  }
  out.flush();
  if (!out) throw Error("write failed for " + path);
}

TransplantPlan read_plan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open plan " + path);
  TransplantPlan plan;
  bool have_summary = false;
  std::size_t expect_entries = 0, expect_unresolved = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("type"))
      throw ParseError(path, line_no, "invalid plan record");
    std::string type = j["type"].get<std::string>();
    if (type == "summary") {
      have_summary = true;
      expect_entries = j.at("new_tokens").get<std::size_t>();
      expect_unresolved = j.at("unresolved").get<std::size_t>();
    } else if (type == "entry") {
      plan.entries.push_back({j.at("new_token").get<std::string>(), j.at("new_id").get<std::size_t>(),
                              j.at("source_token").get<std::string>(), j.at("source_id").get<std::size_t>()});
    } else if (type == "unresolved") {
      plan.unresolved.push_back(j.at("token").get<std::string>());
    } else {
      throw ParseError(path, line_no, "unknown plan record type \"" + type + "\"");
    }
  }
  if (!have_summary) throw Error(path + ": plan has no summary record");
  if (plan.entries.size() != expect_entries || plan.unresolved.size() != expect_unresolved)
    throw Error(path + ": plan body does not match its summary counts");
  return plan;
}

}  // namespace agmg
