#include "agmg/refiner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <thread>

#include "agmg/sha256.hpp"
#include "agmg/unicode.hpp"
#include "httplib.h"
#include "json.hpp"

namespace agmg {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kSystemInstruction =
    "You are a cautious data editor. Your job is to fix alignment errors between Ancient Greek "
    "(“grc”) and Modern Greek (“ell”) sentences inside a JSONL file. Do not translate or "
    "paraphrase any text. Only merge/split and reorder within a row while keeping the original order of "
    "sentences.";

constexpr const char* kResponseContract =
    "Respond with a JSON array of edit records and nothing else. Each record is an object "
    "{\"row_id\": string, \"op\": \"merge\"|\"split\"|\"reorder\"|\"flag\", \"side\": \"grc\"|\"ell\", "
    "\"indices\": [int, ...], \"split_points\": [int, ...], \"note\": string}. "
    "merge joins the contiguous sentences at `indices` with a single space; split divides the one sentence at "
    "indices[0] at the given character offsets; reorder places the sentences at the listed positions in the "
    "listed order; flag requests human review without changing text. Respond with [] when no row needs changes.";

std::string side_name(Side s) { return s == Side::Grc ? "grc" : "ell"; }

std::string join_space(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += ' ';
    out += parts[i];
  }
  return out;
}

std::string lower_ascii(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string trim(const std::string& s) {
  std::u32string u = uni::decode_utf8(s);
  std::size_t b = 0, e = u.size();
  while (b < e && uni::is_space(u[b])) ++b;
  while (e > b && uni::is_space(u[e - 1])) --e;
  return uni::encode_utf8(u.substr(b, e - b));
}

struct EditFailure {
  std::string reason;
};

// Builds the edited side or explains why the edit is malformed. Validation
// of the text-preservation invariant happens separately on the result.
std::vector<std::string> build_candidate(const std::vector<std::string>& side, const RefineEdit& e) {
  const std::size_t n = side.size();
  for (std::size_t idx : e.indices)
    if (idx >= n) throw EditFailure{"index " + std::to_string(idx) + " out of range"};

  switch (e.op) {
    case EditOp::Flag:
      return side;
    case EditOp::Merge: {
      if (e.indices.size() < 2) throw EditFailure{"merge needs at least two indices"};
      for (std::size_t i = 1; i < e.indices.size(); ++i)
        if (e.indices[i] != e.indices[i - 1] + 1) throw EditFailure{"merge indices must be contiguous ascending"};
      std::vector<std::string> out;
      out.reserve(n - e.indices.size() + 1);
      std::string merged;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == e.indices.front()) {
          std::vector<std::string> members(side.begin() + static_cast<std::ptrdiff_t>(e.indices.front()),
                                           side.begin() + static_cast<std::ptrdiff_t>(e.indices.back()) + 1);
          out.push_back(join_space(members));
          i = e.indices.back();
        } else {
          out.push_back(side[i]);
        }
      }
      return out;
    }
    case EditOp::Split: {
      if (e.indices.size() != 1) throw EditFailure{"split takes exactly one index"};
      if (e.split_points.empty()) throw EditFailure{"split needs split_points"};
      std::u32string u = uni::decode_utf8(side[e.indices[0]]);
      std::size_t prev = 0;
      std::vector<std::string> fragments;
      for (std::size_t p : e.split_points) {
        if (p <= prev || p >= u.size()) throw EditFailure{"split_points must be strictly increasing interior offsets"};
        fragments.push_back(trim(uni::encode_utf8(u.substr(prev, p - prev))));
        prev = p;
      }
      fragments.push_back(trim(uni::encode_utf8(u.substr(prev))));
      for (const auto& f : fragments)
        if (f.empty()) throw EditFailure{"split produces an empty sentence"};
      std::vector<std::string> out;
      out.reserve(n + fragments.size() - 1);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == e.indices[0]) {
          out.insert(out.end(), fragments.begin(), fragments.end());
        } else {
          out.push_back(side[i]);
        }
      }
      return out;
    }
    case EditOp::Reorder: {
      if (e.indices.size() < 2) throw EditFailure{"reorder needs at least two indices"};
      std::vector<std::size_t> sorted = e.indices;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw EditFailure{"reorder indices must be distinct"};
      std::vector<std::string> out = side;
      for (std::size_t i = 0; i < sorted.size(); ++i) out[sorted[i]] = side[e.indices[i]];
      return out;
    }
  }
  throw EditFailure{"unknown op"};
}

json edit_to_json(const RefineEdit& e) {
  static const char* kOpNames[] = {"merge", "split", "reorder", "flag"};
  json j;
  j["row_id"] = e.row_id;
  j["op"] = kOpNames[static_cast<int>(e.op)];
  j["side"] = side_name(e.side);
  j["indices"] = e.indices;
  if (!e.split_points.empty()) j["split_points"] = e.split_points;
  if (!e.note.empty()) j["note"] = e.note;
  return j;
}

RefineEdit edit_from_json(const json& j) {
  if (!j.is_object()) throw Error("edit record must be an object");
  RefineEdit e;
  if (!j.contains("row_id") || !j["row_id"].is_string()) throw Error("edit needs a string row_id");
  e.row_id = j["row_id"].get<std::string>();
  if (!j.contains("op") || !j["op"].is_string()) throw Error("edit needs an op");
  std::string op = lower_ascii(j["op"].get<std::string>());
  if (op == "merge") e.op = EditOp::Merge;
  else if (op == "split") e.op = EditOp::Split;
  else if (op == "reorder") e.op = EditOp::Reorder;
  else if (op == "flag") e.op = EditOp::Flag;
  else throw Error("unknown op \"" + op + "\"");
  std::string side = lower_ascii(j.value("side", "grc"));
  if (side == "grc") e.side = Side::Grc;
  else if (side == "ell") e.side = Side::Ell;
  else throw Error("unknown side \"" + side + "\"");
  if (j.contains("indices")) {
    for (const auto& v : j["indices"]) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw Error("indices must be non-negative integers");
      e.indices.push_back(v.get<std::size_t>());
    }
  }
  if (j.contains("split_points")) {
    for (const auto& v : j["split_points"]) {
      if (!v.is_number_integer() || v.get<std::int64_t>() <= 0) throw Error("split_points must be positive integers");
      e.split_points.push_back(v.get<std::size_t>());
    }
  }
  e.note = j.value("note", "");
  return e;
}

std::string strip_code_fences(const std::string& text) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    std::size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line.compare(first, 3, "```") != 0) {
      out += line;
      out += '\n';
    }
    if (eol == std::string::npos) break;
    pos = eol + 1;
  }
  return out;
}

// Extracts top-level {...} spans, respecting strings and escapes.
std::vector<std::string> scan_json_objects(const std::string& text) {
  std::vector<std::string> objects;
  int depth = 0;
  bool in_string = false, escaped = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') {
      in_string = depth > 0;
      continue;
    }
    if (c == '{') {
      if (depth == 0) start = i;
      ++depth;
    } else if (c == '}' && depth > 0) {
      --depth;
      if (depth == 0) objects.push_back(text.substr(start, i - start + 1));
    }
  }
  return objects;
}

}  // namespace

std::string build_prompt(const std::vector<RefineRow>& rows) {
  if (rows.empty()) throw Error("build_prompt: empty batch");
  std::string prompt = kSystemInstruction;
  prompt += "\n\nRows:\n";
  for (const RefineRow& r : rows) {
    json j;
    j["id"] = r.id;
    j["grc"] = r.grc_sentences;
    j["ell"] = r.ell_sentences;
    prompt += j.dump();
    prompt += '\n';
  }
  prompt += '\n';
  prompt += kResponseContract;
  return prompt;
}

std::string call_refiner(const std::string& prompt, RefineTransport& transport) {
  return transport.send(prompt);
}

RateLimiter::RateLimiter(double requests_per_minute, std::function<void(std::chrono::milliseconds)> sleeper)
    : sleeper_(std::move(sleeper)), next_(Clock::now()) {
  if (!(requests_per_minute > 0)) throw Error("rate limit must be positive");
  interval_ = std::chrono::milliseconds(static_cast<long>(60000.0 / requests_per_minute));
  if (!sleeper_) sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

void RateLimiter::acquire() {
  std::lock_guard<std::mutex> lock(mu_);
  Clock::time_point now = Clock::now();
  if (now < next_) {
    sleeper_(std::chrono::duration_cast<std::chrono::milliseconds>(next_ - now));
    now = next_;
  }
  next_ = now + interval_;
}

HttpTransport::HttpTransport(HttpTransportConfig cfg, std::function<void(std::chrono::milliseconds)> sleeper)
    : cfg_(std::move(cfg)),
      sleeper_(sleeper ? std::move(sleeper)
                       : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }),
      limiter_(cfg_.requests_per_minute, sleeper_) {
  if (cfg_.endpoint.empty()) throw Error("http transport needs an endpoint");
}

std::string HttpTransport::send(const std::string& prompt) {
  std::size_t scheme_end = cfg_.endpoint.find("://");
  if (scheme_end == std::string::npos) throw Error("endpoint must include a scheme: " + cfg_.endpoint);
  std::size_t path_start = cfg_.endpoint.find('/', scheme_end + 3);
  std::string base = path_start == std::string::npos ? cfg_.endpoint : cfg_.endpoint.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : cfg_.endpoint.substr(path_start);

  json body;
  body["model"] = cfg_.model;
  body["input"] = prompt;
  std::string payload = body.dump();

  httplib::Headers headers;
  if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key != nullptr && *key != '\0')
    headers.emplace("Authorization", std::string("Bearer ") + key);

  std::string last_failure = "no attempt made";
  auto backoff = cfg_.initial_backoff;
  for (int attempt = 1; attempt <= cfg_.attempts; ++attempt) {
    if (attempt > 1) {
      sleeper_(backoff);
      backoff *= 2;
    }
    limiter_.acquire();
    httplib::Client client(base);
    client.set_read_timeout(120, 0);
    auto res = client.Post(path, headers, payload, "application/json");
    if (!res) {
      last_failure = "connection error (" + httplib::to_string(res.error()) + ")";
      continue;
    }
    if (res->status >= 200 && res->status < 300) return res->body;
    last_failure = "status " + std::to_string(res->status);
    if (res->status != 429 && res->status < 500) break;  // non-retryable client error
  }
  throw Error("refiner transport failed after " + std::to_string(cfg_.attempts) + " attempts: " + last_failure);
}

ReplayTransport::ReplayTransport(const std::string& fixture_path) : path_(fixture_path) {
  std::ifstream in(fixture_path, std::ios::binary);
  if (!in) throw Error("cannot open replay fixture " + fixture_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("prompt_sha256") || !j.contains("response"))
      throw ParseError(fixture_path, line_no, "expected {\"prompt_sha256\", \"response\"}");
    by_hash_[j["prompt_sha256"].get<std::string>()] = j["response"].get<std::string>();
  }
}

std::string ReplayTransport::send(const std::string& prompt) {
  std::string hash = sha256_hex(prompt);
  auto it = by_hash_.find(hash);
  if (it == by_hash_.end()) throw Error("replay fixture " + path_ + " has no entry for prompt hash " + hash);
  return it->second;
}

RecordingTransport::RecordingTransport(std::unique_ptr<RefineTransport> inner, const std::string& fixture_path)
    : inner_(std::move(inner)), path_(fixture_path) {}

std::string RecordingTransport::send(const std::string& prompt) {
  std::string response = inner_->send(prompt);
  std::lock_guard<std::mutex> lock(mu_);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot append to fixture " + path_);
  json j;
  j["prompt_sha256"] = sha256_hex(prompt);
  j["response"] = response;
  out << j.dump() << '\n';
  return response;
}

std::string NullTransport::send(const std::string&) { return "[]"; }

ParsedEdits parse_edits(const std::string& response) {
  std::string cleaned = strip_code_fences(response);
  ParsedEdits result;
  bool structured = false;

  json whole = json::parse(cleaned, nullptr, false);
  std::vector<json> candidates;
  if (!whole.is_discarded() && whole.is_array()) {
    structured = true;  // an explicit (possibly empty) edit list
    for (const auto& el : whole) candidates.push_back(el);
  } else if (!whole.is_discarded() && whole.is_object()) {
    candidates.push_back(whole);
  } else {
    for (const std::string& span : scan_json_objects(cleaned)) {
      json j = json::parse(span, nullptr, false);
      if (!j.is_discarded()) candidates.push_back(j);
    }
  }

  for (const json& c : candidates) {
    try {
      result.edits.push_back(edit_from_json(c));
    } catch (const Error& e) {
      result.malformed.push_back(std::string(e.what()) + ": " + c.dump());
    }
  }
  if (result.edits.empty() && !structured && result.malformed.empty())
    throw Error("no parseable edit records in response: " + response);
  return result;
}

ApplyResult apply_edits(const RefineRow& row, const std::vector<RefineEdit>& edits) {
  ApplyResult res;
  res.row = row;
  for (const RefineEdit& e : edits) {
    if (e.row_id != row.id) {
      res.rejected.push_back(e);
      continue;
    }
    std::vector<std::string>& side = e.side == Side::Grc ? res.row.grc_sentences : res.row.ell_sentences;
    try {
      std::vector<std::string> candidate = build_candidate(side, e);
      if (collapse_whitespace(join_space(candidate)) != collapse_whitespace(join_space(side)))
        throw EditFailure{"edit changes side text"};
      if (e.op == EditOp::Reorder) {
        std::vector<std::string> a = side, b = candidate;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) throw EditFailure{"reorder changes the sentence multiset"};
      }
      if (e.op == EditOp::Flag) res.flagged = true;
      side = std::move(candidate);
      res.accepted.push_back(e);
    } catch (const EditFailure&) {
      res.rejected.push_back(e);
    }
  }
  return res;
}

RefineRunResult refine_rows(const std::vector<RefineRow>& rows, RefineTransport& transport,
                            const RefineOptions& options) {
  RefineRunResult out;
  out.rows.resize(rows.size());
  if (rows.empty()) return out;
  const std::size_t batch_size = std::max<std::size_t>(1, options.batch_size);
  const std::size_t batch_count = (rows.size() + batch_size - 1) / batch_size;
  out.batches = batch_count;

  std::atomic<std::size_t> next_batch{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&]() {
    while (true) {
      std::size_t b = next_batch.fetch_add(1);
      if (b >= batch_count) return;
      std::size_t begin = b * batch_size;
      std::size_t end = std::min(rows.size(), begin + batch_size);
      try {
        std::vector<RefineRow> batch(rows.begin() + static_cast<std::ptrdiff_t>(begin),
                                     rows.begin() + static_cast<std::ptrdiff_t>(end));
        std::string response = call_refiner(build_prompt(batch), transport);
        ParsedEdits parsed = parse_edits(response);
        std::map<std::string, std::vector<RefineEdit>> by_row;
        for (RefineEdit& e : parsed.edits) by_row[e.row_id].push_back(std::move(e));
        for (std::size_t i = begin; i < end; ++i) {
          auto it = by_row.find(rows[i].id);
          RefinedRow rr;
          if (it == by_row.end()) {
            rr.result.row = rows[i];
          } else {
            rr.result = apply_edits(rows[i], it->second);
            for (const RefineEdit& e : rr.result.accepted)
              if (e.op != EditOp::Flag) rr.modified = true;
          }
          out.rows[i] = std::move(rr);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  std::size_t workers = std::max<std::size_t>(1, std::min(options.workers, batch_count));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace agmg
