#include "agmg/embedder.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "agmg/unicode.hpp"
#include "json.hpp"

namespace agmg {
namespace {

constexpr char kMagic[4] = {'A', 'G', 'V', '1'};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Diacritic-stripped, lowercased codepoints; final sigma folded to sigma.
std::u32string fold_for_hashing(const std::string& text) {
  std::u32string in = uni::decode_utf8(text);
  std::u32string out;
  out.reserve(in.size());
  for (char32_t cp : in) {
    char32_t c = uni::to_lower(uni::strip_marks(cp));
    if (c == U'ς') c = U'σ';
    out.push_back(c);
  }
  return out;
}

void put_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<char*>(b), 4);
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<char*>(b), 8);
}

std::uint32_t get_u32(std::ifstream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t get_u64(std::ifstream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

}  // namespace

SentenceVector make_sentence_vector(Eigen::VectorXf values) {
  SentenceVector v;
  v.norm = values.norm();
  v.values = std::move(values);
  return v;
}

float cosine(const SentenceVector& a, const SentenceVector& b) {
  if (a.values.size() != b.values.size()) throw Error("cosine: dimension mismatch");
  if (a.norm <= 0.0f || b.norm <= 0.0f) throw Error("cosine: zero-norm vector");
  return a.values.dot(b.values) / (a.norm * b.norm);
}

BuiltinEmbedder::BuiltinEmbedder(int dimension) : dimension_(dimension) {
  if (dimension < 8) throw Error("builtin embedder dimension must be >= 8");
}

std::vector<SentenceVector> BuiltinEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<std::size_t> failed;
  std::vector<SentenceVector> out;
  out.reserve(texts.size());
  for (std::size_t t = 0; t < texts.size(); ++t) {
    if (texts[t].empty()) {
      failed.push_back(t);
      out.emplace_back();
      continue;
    }
    Eigen::VectorXf v = Eigen::VectorXf::Zero(dimension_);
    std::u32string folded = fold_for_hashing(texts[t]);
    for (int n = 1; n <= 3; ++n) {
      if (folded.size() < static_cast<std::size_t>(n)) continue;
      for (std::size_t i = 0; i + n <= folded.size(); ++i) {
        std::string gram;
        for (int j = 0; j < n; ++j) uni::append_utf8(gram, folded[i + j]);
        v[static_cast<int>(fnv1a(gram) % static_cast<std::uint64_t>(dimension_))] += 1.0f;
      }
    }
    float norm = v.norm();
    if (norm > 0.0f) v /= norm;
    out.push_back(make_sentence_vector(std::move(v)));
  }
  if (!failed.empty()) {
    std::string msg = "builtin embedder: empty text at index";
    for (std::size_t i : failed) msg += " " + std::to_string(i);
    throw EmbedError(msg, failed);
  }
  return out;
}

FileEmbedder::FileEmbedder(const std::string& vector_path, const std::string& sidecar_path) {
  vectors_ = read_vectors(vector_path);
  std::vector<std::string> texts = read_sidecar(sidecar_path);
  if (texts.size() != vectors_.size())
    throw Error("vector/sidecar length mismatch: " + std::to_string(vectors_.size()) + " vectors vs " +
                std::to_string(texts.size()) + " texts");
  dimension_ = vectors_.empty() ? 0 : static_cast<int>(vectors_.front().values.size());
  for (std::size_t i = 0; i < texts.size(); ++i) by_text_.emplace(texts[i], i);
}

std::vector<SentenceVector> FileEmbedder::embed(const std::vector<std::string>& texts) {
  std::vector<std::size_t> failed;
  std::vector<SentenceVector> out;
  out.reserve(texts.size());
  for (std::size_t t = 0; t < texts.size(); ++t) {
    auto it = by_text_.find(texts[t]);
    if (it == by_text_.end()) {
      failed.push_back(t);
      out.emplace_back();
      continue;
    }
    out.push_back(vectors_[it->second]);
  }
  if (!failed.empty()) {
    std::string msg = "vector file miss at index";
    for (std::size_t i : failed) msg += " " + std::to_string(i);
    throw EmbedError(msg, failed);
  }
  return out;
}

std::vector<SentenceVector> embed_batch(const std::vector<std::string>& texts, EmbeddingProvider& provider) {
  if (texts.empty()) throw Error("embed_batch: empty batch");
  return provider.embed(texts);
}

std::vector<std::string> OverlapTable::window_texts(const std::vector<std::string>& sentences, int k) {
  std::vector<std::string> out;
  int n = static_cast<int>(sentences.size());
  for (int len = 1; len <= std::min(k, n); ++len) {
    for (int start = 0; start + len <= n; ++start) {
      std::string text = sentences[static_cast<std::size_t>(start)];
      for (int j = 1; j < len; ++j) {
        text += ' ';
        text += sentences[static_cast<std::size_t>(start + j)];
      }
      out.push_back(std::move(text));
    }
  }
  return out;
}

OverlapTable OverlapTable::build(const std::vector<std::string>& sentences, int k, EmbeddingProvider& provider) {
  if (k < 1) throw Error("overlap window size must be >= 1");
  if (sentences.empty()) throw Error("build_overlaps: no sentences");
  std::vector<SentenceVector> vecs = embed_batch(window_texts(sentences, k), provider);
  return from_window_vectors(std::move(vecs), static_cast<int>(sentences.size()), k);
}

OverlapTable OverlapTable::from_window_vectors(std::vector<SentenceVector> windows, int n, int k) {
  if (k < 1) throw Error("overlap window size must be >= 1");
  OverlapTable t;
  t.n_ = n;
  t.k_ = k;
  std::size_t idx = 0;
  for (int len = 1; len <= std::min(k, n); ++len) {
    std::vector<SentenceVector> row;
    for (int start = 0; start + len <= n; ++start) {
      if (idx >= windows.size()) throw Error("window vector count does not match table shape");
      row.push_back(std::move(windows[idx++]));
    }
    t.by_len_.push_back(std::move(row));
  }
  if (idx != windows.size()) throw Error("window vector count does not match table shape");
  return t;
}

OverlapTable OverlapTable::from_vectors(std::vector<SentenceVector> singles, int k) {
  if (k < 1) throw Error("overlap window size must be >= 1");
  OverlapTable t;
  t.n_ = static_cast<int>(singles.size());
  t.k_ = k;
  if (t.n_ == 0) return t;
  t.by_len_.push_back(std::move(singles));
  for (int len = 2; len <= std::min(k, t.n_); ++len) {
    std::vector<SentenceVector> row;
    for (int start = 0; start + len <= t.n_; ++start) {
      Eigen::VectorXf sum = t.by_len_[0][static_cast<std::size_t>(start)].values;
      for (int j = 1; j < len; ++j) sum += t.by_len_[0][static_cast<std::size_t>(start + j)].values;
      row.push_back(make_sentence_vector(sum / static_cast<float>(len)));
    }
    t.by_len_.push_back(std::move(row));
  }
  return t;
}

const SentenceVector& OverlapTable::at(int start, int len) const {
  if (len < 1 || len > static_cast<int>(by_len_.size()) || start < 0 ||
      start >= static_cast<int>(by_len_[static_cast<std::size_t>(len - 1)].size()))
    throw Error("overlap window out of range: start=" + std::to_string(start) + " len=" + std::to_string(len));
  return by_len_[static_cast<std::size_t>(len - 1)][static_cast<std::size_t>(start)];
}

std::size_t OverlapTable::entry_count() const {
  std::size_t total = 0;
  for (const auto& row : by_len_) total += row.size();
  return total;
}

const std::vector<SentenceVector>& OverlapTable::singles() const {
  static const std::vector<SentenceVector> kEmpty;
  return by_len_.empty() ? kEmpty : by_len_.front();
}

void write_vectors(const std::vector<SentenceVector>& vectors, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  std::uint32_t dim = vectors.empty() ? 0 : static_cast<std::uint32_t>(vectors.front().values.size());
  out.write(kMagic, 4);
  put_u32(out, dim);
  put_u64(out, vectors.size());
  for (const auto& v : vectors) {
    if (static_cast<std::uint32_t>(v.values.size()) != dim) throw Error("write_vectors: inconsistent dimensions");
    for (int i = 0; i < v.values.size(); ++i) {
      float f = v.values[i];
      std::uint32_t bits;
      std::memcpy(&bits, &f, 4);
      put_u32(out, bits);
    }
  }
  out.flush();
  if (!out) throw Error("write failed for " + path);
}

std::vector<SentenceVector> read_vectors(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error(path + ": not a vector file (bad magic)");
  std::uint32_t dim = get_u32(in);
  std::uint64_t count = get_u64(in);
  if (!in) throw Error(path + ": truncated header");
  if (dim == 0 && count > 0) throw Error(path + ": dimension 0 in header");
  std::vector<SentenceVector> out;
  out.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) {
    Eigen::VectorXf v(dim);
    for (std::uint32_t i = 0; i < dim; ++i) {
      std::uint32_t bits = get_u32(in);
      if (!in) throw Error(path + ": truncated body (header count " + std::to_string(count) + ")");
      float f;
      std::memcpy(&f, &bits, 4);
      if (!std::isfinite(f)) throw Error(path + ": non-finite component");
      v[static_cast<int>(i)] = f;
    }
    out.push_back(make_sentence_vector(std::move(v)));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw Error(path + ": trailing bytes after declared count");
  return out;
}

void write_sidecar(const std::vector<std::string>& texts, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  for (const auto& t : texts) out << nlohmann::json(t).dump() << '\n';
  out.flush();
  if (!out) throw Error("write failed for " + path);
}

std::vector<std::string> read_sidecar(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_string()) throw ParseError(path, line_no, "expected a JSON string");
    out.push_back(j.get<std::string>());
  }
  return out;
}

}  // namespace agmg
