#pragma once

// From-scratch BLEU, chrF/chrF++ and TER with 13a and international
// tokenization. Scores are corpus-level; BLEU and chrF are in [0, 100],
// TER is an edit ratio (lower is better).

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agmg/error.hpp"
#include "json.hpp"

namespace agmg {

enum class BleuTokenizer { ThirteenA, Intl };
enum class BleuSmoothing { None, Exponential };

struct MetricConfig {
  BleuTokenizer bleu_tokenizer = BleuTokenizer::ThirteenA;
  int bleu_max_order = 4;
  BleuSmoothing bleu_smoothing = BleuSmoothing::Exponential;
  int chrf_char_order = 6;
  int chrf_word_order = 0;  // 2 gives chrF++
  double chrf_beta = 2.0;
  bool ter_normalized = true;
};

struct SegmentScores {
  double chrf = 0.0;
  double chrfpp = 0.0;
  double ter = 0.0;
};

struct MetricReport {
  double bleu = 0.0;
  double chrf = 0.0;
  double chrfpp = 0.0;
  double ter = 0.0;
  std::size_t segments = 0;
  std::size_t hyp_tokens = 0;
  std::size_t ref_tokens = 0;
  std::optional<std::vector<SegmentScores>> segment_scores;
  std::map<std::string, double> external;  // e.g. BERTScore / COMET computed elsewhere
};

std::vector<std::string> tokenize_13a(std::string_view text);
std::vector<std::string> tokenize_intl(std::string_view text);

double bleu(const std::vector<std::string>& hyps, const std::vector<std::string>& refs, const MetricConfig& cfg);
double chrf(const std::vector<std::string>& hyps, const std::vector<std::string>& refs, const MetricConfig& cfg);
double ter(const std::vector<std::string>& hyps, const std::vector<std::string>& refs, const MetricConfig& cfg);

// Runs bleu, chrF, chrF++ and TER under one config (chrf_word_order is
// forced to 0 and 2 for the chrf and chrfpp fields respectively).
MetricReport score_corpus(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                          const MetricConfig& cfg, bool per_segment = false);

nlohmann::ordered_json report_to_json(const MetricReport& report);

// Greedy block-shift TER edit count for one segment: shifts plus final
// Levenshtein distance. Exposed for oracle comparison in tests.
std::size_t ter_edits(const std::vector<std::string>& hyp_tokens, const std::vector<std::string>& ref_tokens);

std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace agmg
