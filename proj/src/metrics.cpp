#include "agmg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "agmg/unicode.hpp"

namespace agmg {
namespace {

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

// Characters the 13a tokenizer always pads with spaces: the mteval-v13a
// class [{-~], [[-`], [ -&], [(-+], [:-@] and '/'.
bool is_13a_padded(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return (u >= 0x7B && u <= 0x7E) || (u >= 0x5B && u <= 0x60) || (u >= 0x20 && u <= 0x26) ||
         (u >= 0x28 && u <= 0x2B) || (u >= 0x3A && u <= 0x40) || u == 0x2F;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::u32string u = uni::decode_utf8(s);
  std::vector<std::string> out;
  std::string cur;
  for (char32_t cp : u) {
    if (uni::is_space(cp)) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      uni::append_utf8(cur, cp);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
    std::vector<std::string> gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                  tokens.begin() + static_cast<std::ptrdiff_t>(i) + n);
    ++counts[gram];
  }
  return counts;
}

std::vector<std::string> tokenize_for(const MetricConfig& cfg, const std::string& text) {
  return cfg.bleu_tokenizer == BleuTokenizer::ThirteenA ? tokenize_13a(text) : tokenize_intl(text);
}

void check_corpus(const std::vector<std::string>& hyps, const std::vector<std::string>& refs) {
  if (hyps.size() != refs.size())
    throw Error("corpus length mismatch: " + std::to_string(hyps.size()) + " hypotheses vs " +
                std::to_string(refs.size()) + " references");
  if (hyps.empty()) throw Error("empty corpus");
}

// --- chrF statistics -------------------------------------------------------

struct OrderStats {
  std::size_t hyp_total = 0;
  std::size_t ref_total = 0;
  std::size_t matched = 0;
};

std::u32string strip_all_space(std::string_view s) {
  std::u32string u = uni::decode_utf8(s);
  std::u32string out;
  out.reserve(u.size());
  for (char32_t cp : u)
    if (!uni::is_space(cp)) out.push_back(cp);
  return out;
}

std::map<std::u32string, std::size_t> char_ngrams(const std::u32string& s, int n) {
  std::map<std::u32string, std::size_t> counts;
  if (static_cast<int>(s.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= s.size(); ++i)
    ++counts[s.substr(i, static_cast<std::size_t>(n))];
  return counts;
}

template <typename Map>
void accumulate_match(const Map& hyp, const Map& ref, OrderStats& st) {
  for (const auto& [gram, c] : hyp) st.hyp_total += c;
  for (const auto& [gram, c] : ref) st.ref_total += c;
  for (const auto& [gram, c] : hyp) {
    auto it = ref.find(gram);
    if (it != ref.end()) st.matched += std::min(c, it->second);
  }
}

void chrf_segment_stats(const std::string& hyp, const std::string& ref, const MetricConfig& cfg,
                        std::vector<OrderStats>& stats) {
  std::u32string h = strip_all_space(hyp), r = strip_all_space(ref);
  int idx = 0;
  for (int n = 1; n <= cfg.chrf_char_order; ++n, ++idx)
    accumulate_match(char_ngrams(h, n), char_ngrams(r, n), stats[static_cast<std::size_t>(idx)]);
  if (cfg.chrf_word_order > 0) {
    std::vector<std::string> hw = split_ws(hyp), rw = split_ws(ref);
    for (int n = 1; n <= cfg.chrf_word_order; ++n, ++idx)
      accumulate_match(count_ngrams(hw, n), count_ngrams(rw, n), stats[static_cast<std::size_t>(idx)]);
  }
}

double chrf_from_stats(const std::vector<OrderStats>& stats, double beta) {
  const double b2 = beta * beta;
  double sum = 0.0;
  int orders = 0;
  for (const OrderStats& st : stats) {
    if (st.hyp_total == 0 && st.ref_total == 0) continue;  // no signal at this order
    double p = st.hyp_total > 0 ? static_cast<double>(st.matched) / static_cast<double>(st.hyp_total) : 0.0;
    double r = st.ref_total > 0 ? static_cast<double>(st.matched) / static_cast<double>(st.ref_total) : 0.0;
    double denom = b2 * p + r;
    sum += denom > 0 ? (1.0 + b2) * p * r / denom : 0.0;
    ++orders;
  }
  return orders == 0 ? 0.0 : 100.0 * sum / orders;
}

}  // namespace

std::vector<std::string> tokenize_13a(std::string_view text) {
  std::string line(text);
  line = replace_all(std::move(line), "<skipped>", "");
  line = replace_all(std::move(line), "-\n", "");
  line = replace_all(std::move(line), "\n", " ");
  if (line.find('&') != std::string::npos) {
    line = replace_all(std::move(line), "&quot;", "\"");
    line = replace_all(std::move(line), "&amp;", "&");
    line = replace_all(std::move(line), "&lt;", "<");
    line = replace_all(std::move(line), "&gt;", ">");
  }
  line = " " + line + " ";

  // Pad the language-independent punctuation class.
  std::string padded;
  padded.reserve(line.size() * 2);
  for (char c : line) {
    if (is_13a_padded(c) && c != ' ') {
      padded += ' ';
      padded += c;
      padded += ' ';
    } else {
      padded += c;
    }
  }

  // Period/comma beside a non-digit; digit before dash. Each rule scans
  // left to right over its input with non-overlapping two-char matches.
  auto two_char_rule = [](const std::string& s, auto matches, bool space_before, bool space_after) {
    std::string out;
    out.reserve(s.size() * 2);
    std::size_t i = 0;
    while (i < s.size()) {
      if (i + 1 < s.size() && matches(s[i], s[i + 1])) {
        if (space_before) {
          out += s[i];
          out += ' ';
          out += s[i + 1];
          out += ' ';
        } else {
          out += ' ';
          out += s[i];
          out += ' ';
          out += s[i + 1];
        }
        i += 2;
      } else {
        out += s[i];
        ++i;
      }
    }
    return out;
  };
  std::string s1 = two_char_rule(
      padded, [](char a, char b) { return !is_ascii_digit(a) && (b == '.' || b == ','); }, true, true);
  std::string s2 = two_char_rule(
      s1, [](char a, char b) { return (a == '.' || a == ',') && !is_ascii_digit(b); }, false, true);
  std::string s3 = two_char_rule(
      s2, [](char a, char b) { return is_ascii_digit(a) && b == '-'; }, true, true);

  return split_ws(s3);
}

std::vector<std::string> tokenize_intl(std::string_view text) {
  std::u32string s = uni::decode_utf8(text);

  auto pass = [](const std::u32string& in, auto matches, bool space_before) {
    std::u32string out;
    out.reserve(in.size() * 2);
    std::size_t i = 0;
    while (i < in.size()) {
      if (i + 1 < in.size() && matches(in[i], in[i + 1])) {
        if (space_before) {
          out += in[i];
          out += U' ';
          out += in[i + 1];
          out += U' ';
        } else {
          out += U' ';
          out += in[i];
          out += U' ';
          out += in[i + 1];
        }
        i += 2;
      } else {
        out += in[i];
        ++i;
      }
    }
    return out;
  };

  std::u32string s1 = pass(
      s, [](char32_t a, char32_t b) { return !uni::is_number(a) && uni::is_punct(b); }, true);
  std::u32string s2 = pass(
      s1, [](char32_t a, char32_t b) { return uni::is_punct(a) && !uni::is_number(b); }, false);

  std::u32string s3;
  s3.reserve(s2.size() * 2);
  for (char32_t cp : s2) {
    if (uni::is_symbol(cp)) {
      s3 += U' ';
      s3 += cp;
      s3 += U' ';
    } else {
      s3 += cp;
    }
  }
  return split_ws(uni::encode_utf8(s3));
}

double bleu(const std::vector<std::string>& hyps, const std::vector<std::string>& refs, const MetricConfig& cfg) {
  check_corpus(hyps, refs);
  const int max_order = cfg.bleu_max_order;
  if (max_order < 1) throw Error("bleu: max order must be >= 1");

  std::vector<std::size_t> matched(static_cast<std::size_t>(max_order), 0);
  std::vector<std::size_t> total(static_cast<std::size_t>(max_order), 0);
  std::size_t hyp_len = 0, ref_len = 0;

  for (std::size_t seg = 0; seg < hyps.size(); ++seg) {
    std::vector<std::string> h = tokenize_for(cfg, hyps[seg]);
    std::vector<std::string> r = tokenize_for(cfg, refs[seg]);
    hyp_len += h.size();
    ref_len += r.size();
    for (int n = 1; n <= max_order; ++n) {
      NgramCounts hc = count_ngrams(h, n);
      NgramCounts rc = count_ngrams(r, n);
      for (const auto& [gram, c] : hc) {
        total[static_cast<std::size_t>(n - 1)] += c;
        auto it = rc.find(gram);
        if (it != rc.end()) matched[static_cast<std::size_t>(n - 1)] += std::min(c, it->second);
      }
    }
  }

  if (hyp_len == 0) return 0.0;

  double log_sum = 0.0;
  int orders = 0;
  int zeros_seen = 0;
  for (int n = 1; n <= max_order; ++n) {
    std::size_t t = total[static_cast<std::size_t>(n - 1)];
    if (t == 0) continue;  // corpus shorter than this order
    std::size_t m = matched[static_cast<std::size_t>(n - 1)];
    double p;
    if (m == 0) {
      if (cfg.bleu_smoothing == BleuSmoothing::None) return 0.0;
      ++zeros_seen;
      p = 1.0 / (std::pow(2.0, zeros_seen) * static_cast<double>(hyp_len));
    } else {
      p = static_cast<double>(m) / static_cast<double>(t);
    }
    log_sum += std::log(p);
    ++orders;
  }
  if (orders == 0) return 0.0;

  double bp = hyp_len < ref_len
                  ? std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len))
                  : 1.0;
  return 100.0 * bp * std::exp(log_sum / orders);
}

double chrf(const std::vector<std::string>& hyps, const std::vector<std::string>& refs, const MetricConfig& cfg) {
  check_corpus(hyps, refs);
  if (cfg.chrf_char_order < 1) throw Error("chrf: char order must be >= 1");
  if (cfg.chrf_word_order < 0) throw Error("chrf: word order must be >= 0");
  if (!(cfg.chrf_beta > 0)) throw Error("chrf: beta must be > 0");
  std::vector<OrderStats> stats(static_cast<std::size_t>(cfg.chrf_char_order + cfg.chrf_word_order));
  for (std::size_t seg = 0; seg < hyps.size(); ++seg) chrf_segment_stats(hyps[seg], refs[seg], cfg, stats);
  return chrf_from_stats(stats, cfg.chrf_beta);
}

std::size_t levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

namespace {

constexpr std::size_t kMaxShiftLen = 10;

bool is_subsequence_block(const std::vector<std::string>& ref, const std::vector<std::string>& hyp,
                          std::size_t start, std::size_t len) {
  if (ref.size() < len) return false;
  for (std::size_t r = 0; r + len <= ref.size(); ++r) {
    bool match = true;
    for (std::size_t k = 0; k < len; ++k) {
      if (ref[r + k] != hyp[start + k]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

std::vector<std::string> apply_shift(const std::vector<std::string>& hyp, std::size_t start, std::size_t len,
                                     std::size_t dest) {
  std::vector<std::string> base;
  base.reserve(hyp.size());
  for (std::size_t i = 0; i < hyp.size(); ++i)
    if (i < start || i >= start + len) base.push_back(hyp[i]);
  std::vector<std::string> out(base.begin(), base.begin() + static_cast<std::ptrdiff_t>(dest));
  out.insert(out.end(), hyp.begin() + static_cast<std::ptrdiff_t>(start),
             hyp.begin() + static_cast<std::ptrdiff_t>(start + len));
  out.insert(out.end(), base.begin() + static_cast<std::ptrdiff_t>(dest), base.end());
  return out;
}

}  // namespace

std::size_t ter_edits(const std::vector<std::string>& hyp_tokens, const std::vector<std::string>& ref_tokens) {
  std::vector<std::string> cur = hyp_tokens;
  std::size_t shifts = 0;
  while (true) {
    std::size_t base = levenshtein(cur, ref_tokens);
    if (base == 0) break;
    std::size_t best = base;
    std::vector<std::string> best_cur;
    for (std::size_t len = 1; len <= std::min(kMaxShiftLen, cur.size()); ++len) {
      for (std::size_t start = 0; start + len <= cur.size(); ++start) {
        if (!is_subsequence_block(ref_tokens, cur, start, len)) continue;
        for (std::size_t dest = 0; dest + len <= cur.size(); ++dest) {
          if (dest == start) continue;
          std::vector<std::string> cand = apply_shift(cur, start, len, dest);
          std::size_t d = levenshtein(cand, ref_tokens);
          if (d < best) {
            best = d;
            best_cur = std::move(cand);
          }
        }
      }
    }
    if (best >= base) break;
    cur = std::move(best_cur);
    ++shifts;
  }
  return shifts + levenshtein(cur, ref_tokens);
}

double ter(const std::vector<std::string>& hyps, const std::vector<std::string>& refs, const MetricConfig& cfg) {
  check_corpus(hyps, refs);
  std::size_t edits = 0, ref_len = 0;
  for (std::size_t seg = 0; seg < hyps.size(); ++seg) {
    std::vector<std::string> h = tokenize_for(cfg, hyps[seg]);
    std::vector<std::string> r = tokenize_for(cfg, refs[seg]);
    if (r.empty()) throw Error("ter: empty reference segment at index " + std::to_string(seg));
    edits += ter_edits(h, r);
    ref_len += r.size();
  }
  if (!cfg.ter_normalized) return static_cast<double>(edits);
  return static_cast<double>(edits) / static_cast<double>(ref_len);
}

MetricReport score_corpus(const std::vector<std::string>& hyps, const std::vector<std::string>& refs,
                          const MetricConfig& cfg, bool per_segment) {
  check_corpus(hyps, refs);
  MetricReport rep;
  rep.segments = hyps.size();
  MetricConfig chrf_cfg = cfg;
  chrf_cfg.chrf_word_order = 0;
  MetricConfig chrfpp_cfg = cfg;
  chrfpp_cfg.chrf_word_order = 2;

  rep.bleu = bleu(hyps, refs, cfg);
  rep.chrf = chrf(hyps, refs, chrf_cfg);
  rep.chrfpp = chrf(hyps, refs, chrfpp_cfg);
  rep.ter = ter(hyps, refs, cfg);
  for (std::size_t seg = 0; seg < hyps.size(); ++seg) {
    rep.hyp_tokens += tokenize_for(cfg, hyps[seg]).size();
    rep.ref_tokens += tokenize_for(cfg, refs[seg]).size();
  }

  if (per_segment) {
    std::vector<SegmentScores> scores;
    scores.reserve(hyps.size());
    for (std::size_t seg = 0; seg < hyps.size(); ++seg) {
      std::vector<std::string> h1 = {hyps[seg]}, r1 = {refs[seg]};
      SegmentScores s;
      s.chrf = chrf(h1, r1, chrf_cfg);
      s.chrfpp = chrf(h1, r1, chrfpp_cfg);
      s.ter = ter(h1, r1, cfg);
      scores.push_back(s);
    }
    rep.segment_scores = std::move(scores);
  }
  return rep;
}

nlohmann::ordered_json report_to_json(const MetricReport& report) {
  nlohmann::ordered_json j;
  j["bleu"] = report.bleu;
  j["chrf"] = report.chrf;
  j["chrfpp"] = report.chrfpp;
  j["ter"] = report.ter;
  j["segments"] = report.segments;
  j["hyp_tokens"] = report.hyp_tokens;
  j["ref_tokens"] = report.ref_tokens;
  if (report.segment_scores) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : *report.segment_scores)
      arr.push_back({{"chrf", s.chrf}, {"chrfpp", s.chrfpp}, {"ter", s.ter}});
    j["segment_scores"] = arr;
  }
  if (!report.external.empty()) j["external"] = report.external;
  return j;
}

}  // namespace agmg
