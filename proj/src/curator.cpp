#include "agmg/curator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <tuple>
#include <unordered_map>

#include "agmg/normalizer.hpp"
#include "agmg/unicode.hpp"

namespace agmg {
namespace {

using json = nlohmann::ordered_json;

std::string normalized_grc(const SentencePair& p) { return collapse_whitespace(uni::nfc(p.grc)); }

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Deterministic Fisher-Yates; std::shuffle is implementation-defined.
template <typename T>
void seeded_shuffle(std::vector<T>& v, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

struct Group {
  std::vector<std::size_t> pair_indices;  // into the kept-pair vector
  Dialect dialect = Dialect::Attic;
  bool forced_train = false;
  std::size_t first_index = 0;
};

}  // namespace

std::string dedup_key(std::string_view ell) {
  std::u32string u = uni::decode_utf8(uni::nfc(ell));
  std::u32string out;
  out.reserve(u.size());
  bool pending_space = false;
  for (char32_t cp : u) {
    if (uni::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (uni::is_punct(cp)) continue;
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(uni::to_lower(cp));
  }
  return uni::encode_utf8(out);
}

DedupResult deduplicate(const std::vector<SentencePair>& pairs) {
  DedupResult result;
  std::unordered_map<std::string, std::size_t> first_by_key;  // key -> index into kept
  for (const SentencePair& p : pairs) {
    std::string key = dedup_key(p.ell);
    auto it = first_by_key.find(key);
    if (it == first_by_key.end()) {
      first_by_key.emplace(std::move(key), result.kept.size());
      result.kept.push_back(p);
      continue;
    }
    const SentencePair& twin = result.kept[it->second];
    bool same_source = normalized_grc(p) == normalized_grc(twin);
    bool different_translator = p.meta.translator != twin.meta.translator;
    if (same_source && different_translator) {
      result.kept.push_back(p);  // multi-reference variant, retained
    } else {
      result.dropped.push_back({p.id, twin.id});
    }
  }

  std::unordered_map<std::string, std::vector<std::size_t>> by_grc;
  for (std::size_t i = 0; i < result.kept.size(); ++i) by_grc[normalized_grc(result.kept[i])].push_back(i);
  for (const auto& [grc, members] : by_grc) {
    if (members.size() < 2) continue;
    for (std::size_t i : members) result.multi_reference_ids.insert(result.kept[i].id);
  }
  return result;
}

std::map<Split, std::vector<SentencePair>> make_splits(const std::vector<SentencePair>& pairs,
                                                       const SplitSpec& spec) {
  if (spec.stress_pairs > 0 && spec.stress_dialects.empty())
    throw Error("make_splits: stress split requested without stress dialects");

  // Excerpt groups.
  std::map<std::tuple<std::string, std::string, std::uint64_t>, std::size_t> group_of_key;
  std::vector<Group> groups;
  std::vector<std::size_t> group_of_pair(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto key = std::make_tuple(pairs[i].meta.author, pairs[i].meta.title, pairs[i].meta.segment_index);
    auto [it, inserted] = group_of_key.emplace(key, groups.size());
    if (inserted) groups.push_back({{}, pairs[i].meta.dialect, false, i});
    groups[it->second].pair_indices.push_back(i);
    group_of_pair[i] = it->second;
  }

  // Fuse groups sharing a dedup key, so key disjointness holds across splits.
  UnionFind uf(groups.size());
  std::unordered_map<std::string, std::size_t> key_owner;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::string key = dedup_key(pairs[i].ell);
    auto [it, inserted] = key_owner.emplace(std::move(key), group_of_pair[i]);
    if (!inserted) uf.unite(group_of_pair[i], it->second);
  }

  // Multi-reference sources are pinned to Train, whole group.
  std::unordered_map<std::string, std::vector<std::size_t>> by_grc;
  for (std::size_t i = 0; i < pairs.size(); ++i) by_grc[normalized_grc(pairs[i])].push_back(i);
  for (const auto& [grc, members] : by_grc) {
    if (members.size() < 2) continue;
    for (std::size_t i : members) groups[uf.find(group_of_pair[i])].forced_train = true;
  }

  std::map<std::size_t, Group> fused;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Group& dst = fused
                     .try_emplace(uf.find(g), Group{{}, groups[g].dialect, false,
                                                     std::numeric_limits<std::size_t>::max()})
                     .first->second;
    dst.pair_indices.insert(dst.pair_indices.end(), groups[g].pair_indices.begin(), groups[g].pair_indices.end());
    dst.forced_train = dst.forced_train || groups[g].forced_train;
    dst.first_index = std::min(dst.first_index, groups[g].first_index);
    dst.dialect = pairs[dst.pair_indices.front()].meta.dialect;
  }
  std::vector<Group> units;
  units.reserve(fused.size());
  for (auto& [root, g] : fused) {
    std::sort(g.pair_indices.begin(), g.pair_indices.end());
    units.push_back(std::move(g));
  }
  std::sort(units.begin(), units.end(), [](const Group& a, const Group& b) { return a.first_index < b.first_index; });
  seeded_shuffle(units, spec.seed);

  auto all_in_stress_dialects = [&](const Group& g) {
    for (std::size_t i : g.pair_indices)
      if (!spec.stress_dialects.count(pairs[i].meta.dialect)) return false;
    return true;
  };
  auto none_in_stress_dialects = [&](const Group& g) {
    for (std::size_t i : g.pair_indices)
      if (spec.stress_dialects.count(pairs[i].meta.dialect)) return false;
    return true;
  };

  std::vector<Split> assignment(units.size(), Split::Train);
  std::vector<bool> taken(units.size(), false);
  for (std::size_t u = 0; u < units.size(); ++u)
    if (units[u].forced_train) taken[u] = true;

  // First-fit up to the exact target; groups are never split.
  auto fill = [&](Split split, std::uint64_t target, auto eligible, const std::string& stratum) {
    std::uint64_t current = 0;
    for (std::size_t u = 0; u < units.size() && current < target; ++u) {
      if (taken[u] || !eligible(units[u])) continue;
      std::uint64_t size = units[u].pair_indices.size();
      if (current + size > target) continue;
      taken[u] = true;
      assignment[u] = split;
      current += size;
    }
    if (current < target)
      throw Error("make_splits: insufficient pairs for the " + stratum + " stratum (need " +
                  std::to_string(target) + ", assembled " + std::to_string(current) + ")");
  };

  if (spec.stress_pairs > 0) fill(Split::Stress, spec.stress_pairs, all_in_stress_dialects, "stress");

  auto fill_proportional = [&](Split split, std::uint64_t target, const std::string& stratum) {
    if (target == 0) return;
    if (spec.dev_test_proportions.empty()) {
      fill(split, target, none_in_stress_dialects, stratum);
      return;
    }
    double weight_sum = 0;
    for (const auto& [d, w] : spec.dev_test_proportions) weight_sum += w;
    if (!(weight_sum > 0)) throw Error("make_splits: dev/test proportions must sum to a positive value");
    std::uint64_t assigned = 0;
    std::size_t idx = 0;
    for (const auto& [dialect, weight] : spec.dev_test_proportions) {
      ++idx;
      std::uint64_t quota = idx == spec.dev_test_proportions.size()
                                ? target - assigned
                                : static_cast<std::uint64_t>(std::llround(target * weight / weight_sum));
      quota = std::min(quota, target - assigned);
      assigned += quota;
      Dialect d = dialect;
      fill(
          split, quota,
          [&](const Group& g) {
            return none_in_stress_dialects(g) && g.dialect == d;
          },
          stratum + "/" + std::string(dialect_name(d)));
    }
  };

  fill_proportional(Split::Dev, spec.dev_pairs, "dev");
  fill_proportional(Split::Test, spec.test_pairs, "test");

  std::map<Split, std::vector<SentencePair>> splits;
  for (Split s : kAllSplits) splits[s];
  for (std::size_t u = 0; u < units.size(); ++u) {
    Split s = taken[u] && !units[u].forced_train ? assignment[u] : Split::Train;
    for (std::size_t i : units[u].pair_indices) splits[s].push_back(pairs[i]);
  }
  return splits;
}

SplitSpec split_spec_from_json(const json& j) {
  SplitSpec spec;
  spec.train_pairs = j.value("train_pairs", std::uint64_t{0});
  spec.dev_pairs = j.value("dev_pairs", std::uint64_t{0});
  spec.test_pairs = j.value("test_pairs", std::uint64_t{0});
  spec.stress_pairs = j.value("stress_pairs", std::uint64_t{0});
  spec.seed = j.value("seed", std::uint64_t{13});
  if (j.contains("stress_dialects")) {
    spec.stress_dialects.clear();
    for (const auto& v : j["stress_dialects"]) {
      auto d = parse_dialect(v.get<std::string>());
      if (!d) throw Error("unknown dialect in stress_dialects: " + v.get<std::string>());
      spec.stress_dialects.insert(*d);
    }
  }
  if (j.contains("dev_test_proportions")) {
    spec.dev_test_proportions.clear();
    for (auto it = j["dev_test_proportions"].begin(); it != j["dev_test_proportions"].end(); ++it) {
      auto d = parse_dialect(it.key());
      if (!d) throw Error("unknown dialect in dev_test_proportions: " + it.key());
      spec.dev_test_proportions[*d] = it.value().get<double>();
    }
  }
  return spec;
}

json split_spec_to_json(const SplitSpec& spec) {
  json j;
  j["train_pairs"] = spec.train_pairs;
  j["dev_pairs"] = spec.dev_pairs;
  j["test_pairs"] = spec.test_pairs;
  j["stress_pairs"] = spec.stress_pairs;
  json dialects = json::array();
  for (Dialect d : spec.stress_dialects) dialects.push_back(std::string(dialect_name(d)));
  j["stress_dialects"] = dialects;
  json props = json::object();
  for (const auto& [d, w] : spec.dev_test_proportions) props[std::string(dialect_name(d))] = w;
  j["dev_test_proportions"] = props;
  j["seed"] = spec.seed;
  return j;
}

}  // namespace agmg
