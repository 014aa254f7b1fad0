#pragma once

// Monotonic sentence alignment by dynamic programming over embedding costs.
// align_exhaustive solves the full DP; align_fast recursively halves the
// problem by averaging adjacent vectors and solves the full DP inside a
// band around the upsampled coarse path. For max(m, n) <= 2 * band_width
// the two are identical by construction.

#include <cstdint>
#include <vector>

#include "agmg/corpus_model.hpp"
#include "agmg/embedder.hpp"

namespace agmg {

struct AlignConfig {
  int max_window = 4;          // largest block side, in sentences
  double skip_cost = 1.0;      // per skipped sentence, on the normalized scale
  int band_width = 10;
  int normalizer_samples = 128;
  std::uint64_t seed = 13;
};

struct Window {
  int start = 0;
  int len = 0;
};

// (1 - cos) * (src_len + tgt_len) / norm for substitution blocks;
// skip_cost * block size for insertions/deletions.
double block_cost(Window src_window, Window tgt_window, const OverlapTable& src_table,
                  const OverlapTable& tgt_table, double norm, const AlignConfig& cfg);

// Mean (1 - cos) over seeded random single-sentence cross pairs, clamped
// to >= 1e-6.
double estimate_normalizer(const OverlapTable& src_table, const OverlapTable& tgt_table, const AlignConfig& cfg);

std::vector<AlignmentBlock> align_exhaustive(const OverlapTable& src_table, const OverlapTable& tgt_table,
                                             const AlignConfig& cfg);

std::vector<AlignmentBlock> align_fast(const OverlapTable& src_table, const OverlapTable& tgt_table,
                                       const AlignConfig& cfg);

double total_cost(const std::vector<AlignmentBlock>& blocks);

// True when blocks tile [0,m) x [0,n) in order without gaps or overlaps.
bool is_valid_tiling(const std::vector<AlignmentBlock>& blocks, int m, int n);

}  // namespace agmg
