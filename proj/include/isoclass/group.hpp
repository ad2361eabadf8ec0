#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <deque>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>
#include <unordered_map>
#include <vector>

#include "isoclass/spaces.hpp"

namespace isoclass {

inline constexpr std::uint64_t kGroupOrderBound = 1000000;

namespace detail {

struct MatrixKey {
  std::vector<std::uint64_t> words;
  friend bool operator==(const MatrixKey&, const MatrixKey&) = default;
};
struct MatrixKeyHash {
  std::size_t operator()(const MatrixKey& k) const {
    std::uint64_t h = 0x9E3779B97F4A7C15ULL;
    for (auto w : k.words) {
      h ^= w + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
      h *= 0xBF58476D1CE4E5B9ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

inline MatrixKey key_of(const Matrix& m) {
  unsigned bits = 1;
  while ((residue_t{1} << bits) < m.field().p()) ++bits;
  MatrixKey k;
  std::uint64_t cur = 0;
  unsigned used = 0;
  for (residue_t x : m.data()) {
    if (used + bits > 64) {
      k.words.push_back(cur);
      cur = 0;
      used = 0;
    }
    cur |= std::uint64_t{x} << used;
    used += bits;
  }
  k.words.push_back(cur);
  return k;
}

inline std::vector<Vector> normalized_vectors(const PrimeField& F, std::size_t n) {
  // Nonzero vectors whose first nonzero coordinate is 1.
  std::vector<Vector> out;
  Vector v(n, 0);
  for (;;) {
    std::size_t pos = 0;
    while (pos < n && ++v[pos] == F.p()) v[pos++] = 0;
    if (pos == n) break;
    std::size_t first = n;
    for (std::size_t i = n; i-- > 0;)
      if (v[i]) first = i;
    if (v[first] == 1) out.push_back(v);
  }
  return out;
}

}  // namespace detail

/// Rough size of I(V, B) used only as a guard before enumeration.
inline double estimated_group_order(const BilinearSpace& s) {
  const double q = s.field().p();
  const double n = static_cast<double>(s.dim());
  if (s.kind() == Kind::Symmetric) return 2.0 * std::pow(q, n * (n - 1) / 2);
  const double m = n / 2;
  return std::pow(q, m * (2 * m + 1));
}

/// Full isometry group of a small space.
class GroupTable {
 public:
  const BilinearSpace& space() const { return space_; }
  const std::vector<Matrix>& elements() const { return elements_; }
  const std::vector<Matrix>& generators() const { return generators_; }
  std::size_t size() const { return elements_.size(); }
  const Matrix& operator[](std::size_t i) const { return elements_[i]; }

  std::optional<std::size_t> index_of(const Matrix& m) const {
    auto it = index_.find(detail::key_of(m));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require_index(const Matrix& m) const {
    auto i = index_of(m);
    require(i.has_value(), ErrorCode::Internal, "matrix not in group table");
    return *i;
  }
  const Matrix& inverse_of(std::size_t i) const { return elements_[inverse_index(i)]; }
  std::size_t inverse_index(std::size_t i) const {
    if (inverses_.empty()) {
      inverses_.resize(elements_.size());
      const Matrix& g = space_.gram();
      Matrix gi = inverse(g);
      for (std::size_t j = 0; j < elements_.size(); ++j)
        inverses_[j] = require_index(gi * elements_[j].transpose() * g);
    }
    return inverses_[i];
  }

  friend GroupTable enumerate_group(const BilinearSpace& s);

 private:
  BilinearSpace space_;
  std::vector<Matrix> elements_;
  std::vector<Matrix> generators_;
  std::unordered_map<detail::MatrixKey, std::size_t, detail::MatrixKeyHash> index_;
  mutable std::vector<std::size_t> inverses_;
};

/// Breadth-first closure of all reflections (symmetric) or transvections
/// (skew).
inline GroupTable enumerate_group(const BilinearSpace& s) {
  require(estimated_group_order(s) <= static_cast<double>(kGroupOrderBound), ErrorCode::TooLarge,
          "isometry group too large to enumerate");
  const PrimeField& F = s.field();
  GroupTable t;
  t.space_ = s;
  for (const auto& v : detail::normalized_vectors(F, s.dim())) {
    if (s.kind() == Kind::Symmetric) {
      if (s.pair(v, v) != 0) t.generators_.push_back(reflection(s, v));
    } else {
      for (residue_t lambda = 1; lambda < F.p(); ++lambda) t.generators_.push_back(transvection(s, v, lambda));
    }
  }
  Matrix id = Matrix::identity(s.dim(), F);
  t.elements_.push_back(id);
  t.index_.emplace(detail::key_of(id), 0);
  for (std::size_t i = 0; i < t.elements_.size(); ++i) {
    for (const auto& g : t.generators_) {
      Matrix x = g * t.elements_[i];
      auto key = detail::key_of(x);
      if (t.index_.find(key) != t.index_.end()) continue;
      require(t.elements_.size() < kGroupOrderBound, ErrorCode::TooLarge, "isometry group too large to enumerate");
      t.index_.emplace(std::move(key), t.elements_.size());
      t.elements_.push_back(std::move(x));
    }
  }
  return t;
}

inline bool bf_conjugate(const Matrix& s, const Matrix& t, const GroupTable& g) {
  for (const auto& c : g.elements())
    if (c * s == t * c) return true;
  return false;
}

/// Indices of the elements commuting with s, ascending.
inline std::vector<std::size_t> bf_centralizer(const Matrix& s, const GroupTable& g) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (g[i] * s == s * g[i]) out.push_back(i);
  return out;
}

/// Literal definition: some C with C Z(S) C^{-1} = Z(T) as sets.
inline bool bf_same_zclass(const Matrix& s, const Matrix& t, const GroupTable& g) {
  auto zs = bf_centralizer(s, g), zt = bf_centralizer(t, g);
  if (zs.size() != zt.size()) return false;
  std::vector<char> in_t(g.size(), 0);
  for (auto i : zt) in_t[i] = 1;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const Matrix& ci = g.inverse_of(c);
    bool ok = true;
    for (auto z : zs) {
      auto idx = g.index_of(g[c] * g[z] * ci);
      if (!idx || !in_t[*idx]) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

/// Conjugacy class id per element (orbits under conjugation by generators).
struct ClassPartition {
  std::vector<std::size_t> class_of;
  std::size_t count = 0;
};

inline ClassPartition conjugacy_partition(const GroupTable& g) {
  std::vector<Matrix> ginv;
  for (const auto& x : g.generators()) ginv.push_back(g.inverse_of(g.require_index(x)));
  ClassPartition p;
  p.class_of.assign(g.size(), SIZE_MAX);
  for (std::size_t start = 0; start < g.size(); ++start) {
    if (p.class_of[start] != SIZE_MAX) continue;
    const std::size_t id = p.count++;
    std::deque<std::size_t> queue{start};
    p.class_of[start] = id;
    while (!queue.empty()) {
      std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t k = 0; k < ginv.size(); ++k) {
        std::size_t y = g.require_index(g.generators()[k] * g[x] * ginv[k]);
        if (p.class_of[y] == SIZE_MAX) {
          p.class_of[y] = id;
          queue.push_back(y);
        }
      }
    }
  }
  return p;
}

/// z-class id per element: classes whose centralizers are conjugate. The
/// centralizers of a conjugacy class are the conjugates of one centralizer,
/// so two classes are z-equivalent iff their sets of centralizers meet.
/// Classes are processed on `jobs` threads.
inline ClassPartition zclass_partition(const GroupTable& g, const ClassPartition& conj, unsigned jobs = 1) {
  std::vector<std::size_t> rep(conj.count, SIZE_MAX);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (rep[conj.class_of[i]] == SIZE_MAX) rep[conj.class_of[i]] = i;
  std::vector<std::size_t> parent(conj.count);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::unordered_map<detail::MatrixKey, std::size_t, detail::MatrixKeyHash> owner;  // centralizer -> class
  std::mutex mu;
  auto process = [&](std::size_t c) {
    const Matrix& x = g[rep[c]];
    auto z = bf_centralizer(x, g);
    // Conjugators for each member y = h x h^{-1} of the class, by BFS over
    // generator conjugation.
    std::unordered_map<std::size_t, std::size_t> conjugator{{rep[c], 0}};
    std::deque<std::size_t> queue{rep[c]};
    while (!queue.empty()) {
      std::size_t y = queue.front();
      queue.pop_front();
      const Matrix& h = g[conjugator.at(y)];
      for (const auto& gen : g.generators()) {
        std::size_t h2 = g.require_index(gen * h);
        std::size_t idx = g.require_index(g[h2] * x * g.inverse_of(h2));
        if (conjugator.emplace(idx, h2).second) queue.push_back(idx);
      }
    }
    std::vector<detail::MatrixKey> keys;
    keys.reserve(conjugator.size());
    for (const auto& [y, h] : conjugator) {
      const Matrix& hinv = g.inverse_of(h);
      std::vector<std::size_t> zy;
      zy.reserve(z.size());
      for (auto e : z) zy.push_back(g.require_index(g[h] * g[e] * hinv));
      std::sort(zy.begin(), zy.end());
      keys.push_back({std::vector<std::uint64_t>(zy.begin(), zy.end())});
    }
    std::lock_guard lock(mu);
    for (auto& key : keys) {
      auto [it, fresh] = owner.emplace(std::move(key), c);
      if (!fresh) parent[find(c)] = find(it->second);
    }
  };
  g.inverse_index(0);  // build the lazy inverse table before sharing
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(conj.count)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c; (c = next++) < conj.count;) process(c);
  };
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ClassPartition out;
  out.class_of.assign(g.size(), 0);
  std::unordered_map<std::size_t, std::size_t> ids;
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::size_t root = find(conj.class_of[i]);
    auto [it, fresh] = ids.emplace(root, ids.size());
    out.class_of[i] = it->second;
  }
  out.count = ids.size();
  return out;
}

}  // namespace isoclass
