#pragma once

// Embedding-provider contract, overlap-window tables for the aligner,
// binary vector file I/O, and a deterministic built-in embedder for
// dependency-free runs. Vector math is Eigen throughout.

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "agmg/error.hpp"

namespace agmg {

struct SentenceVector {
  Eigen::VectorXf values;
  float norm = 0.0f;
};

SentenceVector make_sentence_vector(Eigen::VectorXf values);

// Throws on a zero-norm operand or dimension mismatch.
float cosine(const SentenceVector& a, const SentenceVector& b);

class EmbedError : public Error {
 public:
  EmbedError(const std::string& message, std::vector<std::size_t> failed_indices)
      : Error(message), failed_indices_(std::move(failed_indices)) {}
  const std::vector<std::size_t>& failed_indices() const { return failed_indices_; }

 private:
  std::vector<std::size_t> failed_indices_;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dimension() const = 0;
  virtual std::vector<SentenceVector> embed(const std::vector<std::string>& texts) = 0;
};

// Character 1..3-gram hashing into a fixed number of buckets, counts
// L2-normalized. Text is folded (diacritics stripped, lowercased, final
// sigma mapped to sigma) so Ancient and Modern Greek cognates land near
// each other.
class BuiltinEmbedder : public EmbeddingProvider {
 public:
  explicit BuiltinEmbedder(int dimension = 256);
  int dimension() const override { return dimension_; }
  std::vector<SentenceVector> embed(const std::vector<std::string>& texts) override;

 private:
  int dimension_;
};

// Serves vectors precomputed elsewhere: a binary vector file plus a sidecar
// listing the embedded strings in the same order. Lookup misses are
// reported per batch index.
class FileEmbedder : public EmbeddingProvider {
 public:
  FileEmbedder(const std::string& vector_path, const std::string& sidecar_path);
  int dimension() const override { return dimension_; }
  std::vector<SentenceVector> embed(const std::vector<std::string>& texts) override;

 private:
  int dimension_ = 0;
  std::vector<SentenceVector> vectors_;
  std::unordered_map<std::string, std::size_t> by_text_;
};

std::vector<SentenceVector> embed_batch(const std::vector<std::string>& texts, EmbeddingProvider& provider);

// All (start, length<=k) window vectors over a sentence sequence. Window
// text is the space-joined concatenation of consecutive sentences.
class OverlapTable {
 public:
  OverlapTable() = default;

  static OverlapTable build(const std::vector<std::string>& sentences, int k, EmbeddingProvider& provider);
  // Coarse tables: windows synthesized by averaging member vectors.
  static OverlapTable from_vectors(std::vector<SentenceVector> singles, int k);
  // Rebuilds a table from vectors laid out in window order (len-major).
  static OverlapTable from_window_vectors(std::vector<SentenceVector> windows, int n, int k);

  int size() const { return n_; }
  int max_window() const { return k_; }
  const SentenceVector& at(int start, int len) const;
  std::size_t entry_count() const;
  const std::vector<SentenceVector>& singles() const;

  // Window texts in the same len-major order used by from_window_vectors.
  static std::vector<std::string> window_texts(const std::vector<std::string>& sentences, int k);

 private:
  int n_ = 0;
  int k_ = 1;
  std::vector<std::vector<SentenceVector>> by_len_;  // [len-1][start]
};

// Binary format: "AGV1", u32 dimension, u64 count, count*dimension f32 LE.
void write_vectors(const std::vector<SentenceVector>& vectors, const std::string& path);
std::vector<SentenceVector> read_vectors(const std::string& path);

// Sidecar: one JSON string per line, same order as the vector file.
void write_sidecar(const std::vector<std::string>& texts, const std::string& path);
std::vector<std::string> read_sidecar(const std::string& path);

}  // namespace agmg
