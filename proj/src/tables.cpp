#include "spandep/tables.hpp"

#include <stdexcept>

namespace spandep {

TupleKey CountTable::joined(const TupleKey& ctx, const TupleKey& ev) const {
  if (ctx.n != ctx_arity_ || ev.n != ev_arity_)
    throw std::logic_error("CountTable: arity mismatch");
  TupleKey k = ctx;
  for (uint8_t i = 0; i < ev.n; ++i) k.push(ev.f[i]);
  return k;
}

void CountTable::observe(const TupleKey& ctx, const TupleKey& ev, int64_t weight) {
  if (weight <= 0) throw std::logic_error("CountTable::observe: weight must be positive");
  cells_[joined(ctx, ev)] += weight;
  totals_[ctx] += weight;
  alphabet_.insert(ev);
}

int64_t CountTable::count(const TupleKey& ctx, const TupleKey& ev) const {
  auto it = cells_.find(joined(ctx, ev));
  return it == cells_.end() ? 0 : it->second;
}

int64_t CountTable::total(const TupleKey& ctx) const {
  auto it = totals_.find(ctx);
  return it == totals_.end() ? 0 : it->second;
}

double backoff_prob(std::span<const BackoffLevel> levels, const TupleKey& ev,
                    int64_t threshold, int64_t uniform_alphabet) {
  if (levels.empty()) throw std::logic_error("backoff_prob: empty ladder");
  for (const BackoffLevel& lv : levels) {
    int64_t total = lv.table->total(lv.ctx);
    if (total < threshold) continue;
    int64_t c = lv.table->count(lv.ctx, ev);
    if (c > 0) return static_cast<double>(c) / static_cast<double>(total);
  }
  int64_t alphabet = uniform_alphabet > 0 ? uniform_alphabet : levels.back().table->alphabet_size();
  if (alphabet <= 0)
    throw std::logic_error("backoff_prob: empty event alphabet (nothing was ever observed)");
  return 1.0 / static_cast<double>(alphabet);
}

}  // namespace spandep
