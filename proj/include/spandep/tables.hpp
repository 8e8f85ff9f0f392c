#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace spandep {

// A context or event: a short tuple of symbol ids. -1 is a valid field value
// (out-of-vocabulary word); such keys simply never match observed entries.
struct TupleKey {
  std::array<int32_t, 8> f{};
  uint8_t n = 0;

  void push(int32_t v) { f[n++] = v; }
  bool operator==(const TupleKey& o) const {
    if (n != o.n) return false;
    for (uint8_t i = 0; i < n; ++i)
      if (f[i] != o.f[i]) return false;
    return true;
  }
};

template <class... Ts>
TupleKey make_key(Ts... vs) {
  TupleKey k;
  (k.push(static_cast<int32_t>(vs)), ...);
  return k;
}

struct TupleKeyHash {
  size_t operator()(const TupleKey& k) const {
    uint64_t h = 1469598103934665603ULL;
    for (uint8_t i = 0; i < k.n; ++i) {
      h ^= static_cast<uint64_t>(static_cast<uint32_t>(k.f[i]));
      h *= 1099511628211ULL;
    }
    return static_cast<size_t>(h ^ k.n);
  }
};

// One level of a back-off ladder: event counts bucketed under a fixed-arity
// context, with per-context totals maintained incrementally.
class CountTable {
 public:
  CountTable(int ctx_arity, int ev_arity) : ctx_arity_(ctx_arity), ev_arity_(ev_arity) {}

  void observe(const TupleKey& ctx, const TupleKey& ev, int64_t weight = 1);
  int64_t count(const TupleKey& ctx, const TupleKey& ev) const;
  int64_t total(const TupleKey& ctx) const;

  // Number of distinct events ever observed (the uniform-floor alphabet).
  int64_t alphabet_size() const { return static_cast<int64_t>(alphabet_.size()); }
  bool empty() const { return cells_.empty(); }

  int ctx_arity() const { return ctx_arity_; }
  int ev_arity() const { return ev_arity_; }

  const std::unordered_map<TupleKey, int64_t, TupleKeyHash>& cells() const { return cells_; }

 private:
  TupleKey joined(const TupleKey& ctx, const TupleKey& ev) const;

  int ctx_arity_, ev_arity_;
  std::unordered_map<TupleKey, int64_t, TupleKeyHash> cells_;   // ctx⊕ev -> count
  std::unordered_map<TupleKey, int64_t, TupleKeyHash> totals_;  // ctx -> sum
  std::unordered_set<TupleKey, TupleKeyHash> alphabet_;
};

// One rung of a ladder at query time: a table plus the context to evaluate.
struct BackoffLevel {
  const CountTable* table;
  TupleKey ctx;
};

// Returns count/total at the finest level whose context total meets the
// threshold and which has actually seen the event; when no level resolves,
// falls back to a uniform floor of 1/uniform_alphabet. Pass 0 to derive the
// alphabet from the coarsest level, which sees every observation of the
// family; binary variables pass 2 explicitly. Always > 0.
double backoff_prob(std::span<const BackoffLevel> levels, const TupleKey& ev,
                    int64_t threshold, int64_t uniform_alphabet = 0);

}  // namespace spandep
