#include "agmg/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace agmg {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_config(const AlignConfig& cfg) {
  if (cfg.max_window < 1) throw Error("align: max_window must be >= 1");
  if (cfg.band_width < 1) throw Error("align: band_width must be >= 1");
  if (!(cfg.skip_cost > 0)) throw Error("align: skip_cost must be > 0");
}

struct Move {
  int a = 0;  // source sentences consumed
  int b = 0;  // target sentences consumed
};

std::vector<Move> legal_moves(int k) {
  std::vector<Move> moves;
  for (int a = 0; a <= k; ++a)
    for (int b = 0; b <= k; ++b)
      if (a + b >= 1) moves.push_back({a, b});
  return moves;
}

// Tie-break: prefer the smaller block, then the smaller source side.
bool move_preferred(const Move& cand, const Move& best) {
  if (cand.a + cand.b != best.a + best.b) return cand.a + cand.b < best.a + best.b;
  return cand.a < best.a;
}

std::vector<AlignmentBlock> all_skips(int m, int n, double skip_cost) {
  std::vector<AlignmentBlock> blocks;
  for (int i = 0; i < m; ++i)
    blocks.push_back({static_cast<std::uint32_t>(i), 1, 0, 0, skip_cost});
  for (int j = 0; j < n; ++j)
    blocks.push_back({static_cast<std::uint32_t>(m), 0, static_cast<std::uint32_t>(j), 1, skip_cost});
  return blocks;
}

// Banded DP. lo[i]..hi[i] bound the target index reachable at source index
// i; lo/hi must be monotone with lo[0] == 0 and hi[m] == n.
std::vector<AlignmentBlock> solve_banded(const OverlapTable& src, const OverlapTable& tgt, const AlignConfig& cfg,
                                         const std::vector<int>& lo, const std::vector<int>& hi) {
  const int m = src.size(), n = tgt.size();
  const double norm = estimate_normalizer(src, tgt, cfg);
  const std::vector<Move> moves = legal_moves(cfg.max_window);

  std::vector<std::vector<double>> dp(static_cast<std::size_t>(m) + 1);
  std::vector<std::vector<Move>> back(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) {
    dp[static_cast<std::size_t>(i)].assign(static_cast<std::size_t>(hi[static_cast<std::size_t>(i)] -
                                                                    lo[static_cast<std::size_t>(i)] + 1),
                                           kInf);
    back[static_cast<std::size_t>(i)].resize(dp[static_cast<std::size_t>(i)].size());
  }
  auto in_band = [&](int i, int j) {
    return j >= lo[static_cast<std::size_t>(i)] && j <= hi[static_cast<std::size_t>(i)];
  };
  auto cell = [&](int i, int j) -> double& {
    return dp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - lo[static_cast<std::size_t>(i)])];
  };
  auto back_cell = [&](int i, int j) -> Move& {
    return back[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - lo[static_cast<std::size_t>(i)])];
  };

  cell(0, 0) = 0.0;
  for (int i = 0; i <= m; ++i) {
    for (int j = lo[static_cast<std::size_t>(i)]; j <= hi[static_cast<std::size_t>(i)]; ++j) {
      if (i == 0 && j == 0) continue;
      double best = kInf;
      Move best_move;
      for (const Move& mv : moves) {
        int pi = i - mv.a, pj = j - mv.b;
        if (pi < 0 || pj < 0 || !in_band(pi, pj)) continue;
        double prev = cell(pi, pj);
        if (prev == kInf) continue;
        double c = block_cost({pi, mv.a}, {pj, mv.b}, src, tgt, norm, cfg);
        double total = prev + c;
        if (total < best || (total == best && move_preferred(mv, best_move))) {
          best = total;
          best_move = mv;
        }
      }
      cell(i, j) = best;
      back_cell(i, j) = best_move;
    }
  }

  if (cell(m, n) == kInf) throw Error("align: no path inside band");

  std::vector<AlignmentBlock> blocks;
  int i = m, j = n;
  const double norm_copy = norm;
  while (i != 0 || j != 0) {
    Move mv = back_cell(i, j);
    int pi = i - mv.a, pj = j - mv.b;
    AlignmentBlock b;
    b.src_start = static_cast<std::uint32_t>(pi);
    b.src_len = static_cast<std::uint32_t>(mv.a);
    b.tgt_start = static_cast<std::uint32_t>(pj);
    b.tgt_len = static_cast<std::uint32_t>(mv.b);
    b.cost = block_cost({pi, mv.a}, {pj, mv.b}, src, tgt, norm_copy, cfg);
    blocks.push_back(b);
    i = pi;
    j = pj;
  }
  std::reverse(blocks.begin(), blocks.end());
  return blocks;
}

std::vector<int> full_lo(int m, int) { return std::vector<int>(static_cast<std::size_t>(m) + 1, 0); }
std::vector<int> full_hi(int m, int n) { return std::vector<int>(static_cast<std::size_t>(m) + 1, n); }

std::vector<SentenceVector> downsample(const std::vector<SentenceVector>& singles) {
  std::vector<SentenceVector> out;
  out.reserve((singles.size() + 1) / 2);
  for (std::size_t i = 0; i < singles.size(); i += 2) {
    if (i + 1 < singles.size()) {
      out.push_back(make_sentence_vector((singles[i].values + singles[i + 1].values) * 0.5f));
    } else {
      out.push_back(singles[i]);
    }
  }
  return out;
}

}  // namespace

double block_cost(Window src_window, Window tgt_window, const OverlapTable& src_table,
                  const OverlapTable& tgt_table, double norm, const AlignConfig& cfg) {
  const int size = src_window.len + tgt_window.len;
  if (size < 1) throw Error("block_cost: empty block");
  if (src_window.len == 0 || tgt_window.len == 0) return cfg.skip_cost * size;
  if (!(norm > 0)) throw Error("block_cost: normalizer must be > 0");
  float cos = cosine(src_table.at(src_window.start, src_window.len),
                     tgt_table.at(tgt_window.start, tgt_window.len));
  return (1.0 - static_cast<double>(cos)) * size / norm;
}

double estimate_normalizer(const OverlapTable& src_table, const OverlapTable& tgt_table, const AlignConfig& cfg) {
  const int m = src_table.size(), n = tgt_table.size();
  if (m < 1 || n < 1) throw Error("estimate_normalizer: both sides need at least one sentence");
  std::mt19937_64 rng(cfg.seed);
  const int samples = std::max(1, cfg.normalizer_samples);
  double acc = 0.0;
  for (int s = 0; s < samples; ++s) {
    int i = static_cast<int>(rng() % static_cast<std::uint64_t>(m));
    int j = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
    acc += 1.0 - static_cast<double>(cosine(src_table.at(i, 1), tgt_table.at(j, 1)));
  }
  return std::max(acc / samples, 1e-6);
}

std::vector<AlignmentBlock> align_exhaustive(const OverlapTable& src_table, const OverlapTable& tgt_table,
                                             const AlignConfig& cfg) {
  check_config(cfg);
  const int m = src_table.size(), n = tgt_table.size();
  if (m == 0 && n == 0) return {};
  if (m == 0 || n == 0) return all_skips(m, n, cfg.skip_cost);
  return solve_banded(src_table, tgt_table, cfg, full_lo(m, n), full_hi(m, n));
}

std::vector<AlignmentBlock> align_fast(const OverlapTable& src_table, const OverlapTable& tgt_table,
                                       const AlignConfig& cfg) {
  check_config(cfg);
  const int m = src_table.size(), n = tgt_table.size();
  if (std::max(m, n) <= 2 * cfg.band_width) return align_exhaustive(src_table, tgt_table, cfg);
  if (m == 0 || n == 0) return all_skips(m, n, cfg.skip_cost);

  OverlapTable coarse_src = OverlapTable::from_vectors(downsample(src_table.singles()), cfg.max_window);
  OverlapTable coarse_tgt = OverlapTable::from_vectors(downsample(tgt_table.singles()), cfg.max_window);
  std::vector<AlignmentBlock> coarse = align_fast(coarse_src, coarse_tgt, cfg);

  // Upsampled path corners, in fine coordinates.
  std::vector<std::pair<int, int>> corners;
  corners.emplace_back(0, 0);
  int ci = 0, cj = 0;
  for (const AlignmentBlock& b : coarse) {
    ci += static_cast<int>(b.src_len);
    cj += static_cast<int>(b.tgt_len);
    corners.emplace_back(std::min(2 * ci, m), std::min(2 * cj, n));
  }
  corners.emplace_back(m, n);

  // Target center for every fine source index, interpolated along corners.
  std::vector<int> center(static_cast<std::size_t>(m) + 1, 0);
  for (std::size_t c = 0; c + 1 < corners.size(); ++c) {
    auto [i0, j0] = corners[c];
    auto [i1, j1] = corners[c + 1];
    for (int i = i0; i <= i1; ++i) {
      int j = i1 == i0 ? j1 : j0 + (j1 - j0) * (i - i0) / (i1 - i0);
      center[static_cast<std::size_t>(i)] = std::max(center[static_cast<std::size_t>(i)], j);
    }
  }
  for (std::size_t i = 1; i < center.size(); ++i)
    center[i] = std::max(center[i], center[i - 1]);

  const int radius = 2 * cfg.band_width + cfg.max_window;
  std::vector<int> lo(static_cast<std::size_t>(m) + 1), hi(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) {
    lo[static_cast<std::size_t>(i)] = std::clamp(center[static_cast<std::size_t>(i)] - radius, 0, n);
    hi[static_cast<std::size_t>(i)] = std::clamp(center[static_cast<std::size_t>(i)] + radius, 0, n);
  }
  lo[0] = 0;
  hi[static_cast<std::size_t>(m)] = n;
  for (int i = 1; i <= m; ++i) {
    lo[static_cast<std::size_t>(i)] = std::max(lo[static_cast<std::size_t>(i)], lo[static_cast<std::size_t>(i - 1)]);
  }
  for (int i = m - 1; i >= 0; --i) {
    hi[static_cast<std::size_t>(i)] = std::min(hi[static_cast<std::size_t>(i)], hi[static_cast<std::size_t>(i + 1)]);
    hi[static_cast<std::size_t>(i)] = std::max(hi[static_cast<std::size_t>(i)], lo[static_cast<std::size_t>(i)]);
  }

  try {
    return solve_banded(src_table, tgt_table, cfg, lo, hi);
  } catch (const Error&) {
    // Degenerate coarse path left the band disconnected; solve in full.
    return solve_banded(src_table, tgt_table, cfg, full_lo(m, n), full_hi(m, n));
  }
}

double total_cost(const std::vector<AlignmentBlock>& blocks) {
  double acc = 0.0;
  for (const auto& b : blocks) acc += b.cost;
  return acc;
}

bool is_valid_tiling(const std::vector<AlignmentBlock>& blocks, int m, int n) {
  std::uint32_t i = 0, j = 0;
  for (const auto& b : blocks) {
    if (b.src_len + b.tgt_len < 1) return false;
    if (b.src_start != i || b.tgt_start != j) return false;
    i += b.src_len;
    j += b.tgt_len;
  }
  return i == static_cast<std::uint32_t>(m) && j == static_cast<std::uint32_t>(n);
}

}  // namespace agmg
