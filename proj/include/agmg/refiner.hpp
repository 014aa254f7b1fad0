#pragma once

// LLM-based misalignment correction. The response contract is edit records
// (merge / split / reorder / flag), never rewritten text, so a validator can
// guarantee the model only restructured sentence boundaries: accepted edits
// preserve each side's whitespace-collapsed concatenation and sentence
// order. Transports: live HTTP with retry and rate limiting, replay from a
// recorded fixture, a recording wrapper, and an inert null transport.

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "agmg/error.hpp"
#include "agmg/normalizer.hpp"

namespace agmg {

struct RefineRow {
  std::string id;
  std::vector<std::string> grc_sentences;
  std::vector<std::string> ell_sentences;
};

enum class EditOp { Merge, Split, Reorder, Flag };

struct RefineEdit {
  std::string row_id;
  EditOp op = EditOp::Flag;
  Side side = Side::Grc;
  std::vector<std::size_t> indices;
  std::vector<std::size_t> split_points;  // codepoint offsets, Split only
  std::string note;
};

// System instruction plus the rows as JSONL plus the response-format
// contract. Throws on an empty batch.
std::string build_prompt(const std::vector<RefineRow>& rows);

class RefineTransport {
 public:
  virtual ~RefineTransport() = default;
  virtual std::string send(const std::string& prompt) = 0;
};

std::string call_refiner(const std::string& prompt, RefineTransport& transport);

struct HttpTransportConfig {
  std::string endpoint;             // e.g. http://host:port/v1/refine
  std::string api_key_env = "AGMG_API_KEY";
  std::string model = "gemini-2.5-flash";
  double requests_per_minute = 60.0;
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
};

// Thread-safe minimum-interval limiter shared across refine workers.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;
  explicit RateLimiter(double requests_per_minute,
                       std::function<void(std::chrono::milliseconds)> sleeper = nullptr);
  void acquire();

 private:
  std::chrono::milliseconds interval_;
  std::function<void(std::chrono::milliseconds)> sleeper_;
  std::mutex mu_;
  Clock::time_point next_;
};

class HttpTransport : public RefineTransport {
 public:
  explicit HttpTransport(HttpTransportConfig cfg,
                         std::function<void(std::chrono::milliseconds)> sleeper = nullptr);
  std::string send(const std::string& prompt) override;

 private:
  HttpTransportConfig cfg_;
  std::function<void(std::chrono::milliseconds)> sleeper_;
  RateLimiter limiter_;
};

// JSONL fixture of {"prompt_sha256": ..., "response": ...} records.
class ReplayTransport : public RefineTransport {
 public:
  explicit ReplayTransport(const std::string& fixture_path);
  std::string send(const std::string& prompt) override;

 private:
  std::unordered_map<std::string, std::string> by_hash_;
  std::string path_;
};

// Forwards to an inner transport and appends fixture records for replay.
class RecordingTransport : public RefineTransport {
 public:
  RecordingTransport(std::unique_ptr<RefineTransport> inner, const std::string& fixture_path);
  std::string send(const std::string& prompt) override;

 private:
  std::unique_ptr<RefineTransport> inner_;
  std::string path_;
  std::mutex mu_;
};

// Always answers "no edits"; used for dry runs.
class NullTransport : public RefineTransport {
 public:
  std::string send(const std::string& prompt) override;
};

struct ParsedEdits {
  std::vector<RefineEdit> edits;
  std::vector<std::string> malformed;
};

// Tolerant extraction: code fences and surrounding prose are ignored.
// Throws (carrying the raw response) when nothing parseable remains.
ParsedEdits parse_edits(const std::string& response);

struct ApplyResult {
  RefineRow row;
  std::vector<RefineEdit> accepted;
  std::vector<RefineEdit> rejected;
  bool flagged = false;
};

ApplyResult apply_edits(const RefineRow& row, const std::vector<RefineEdit>& edits);

struct RefineOptions {
  std::size_t batch_size = 20;
  std::size_t workers = 1;
};

struct RefinedRow {
  ApplyResult result;
  bool modified = false;
};

struct RefineRunResult {
  std::vector<RefinedRow> rows;  // same order as input
  std::size_t batches = 0;
};

RefineRunResult refine_rows(const std::vector<RefineRow>& rows, RefineTransport& transport,
                            const RefineOptions& options);

}  // namespace agmg
