#include "spandep/chart.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "spandep/derivation.hpp"
#include "spandep/tables.hpp"

namespace spandep {

size_t SigHash::operator()(const Sig& s) const {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 1099511628211ULL;
  };
  mix(static_cast<uint16_t>(s.start));
  mix(static_cast<uint16_t>(s.end));
  mix(static_cast<uint64_t>(s.left_has_parent) | static_cast<uint64_t>(s.right_has_parent) << 1 |
      static_cast<uint64_t>(s.minimal) << 2);
  mix(static_cast<uint16_t>(s.tag_start));
  mix(static_cast<uint16_t>(s.tag_end));
  mix(static_cast<uint16_t>(s.tag_start1));
  mix(static_cast<uint16_t>(s.tag_end1));
  mix(static_cast<uint16_t>(s.kid_of_left));
  mix(static_cast<uint16_t>(s.kid_of_right));
  return static_cast<size_t>(h);
}

namespace {

enum CoverKind : int8_t { kNoCover = 0, kLeftParent = 1, kRightParent = 2 };

struct SpanRec {
  Sig sig;
  double score = 0;
  uint64_t count = 1;
  int32_t a = -1, b = -1;  // operand arena ids; -1,-1 for seeds
  int8_t cover = kNoCover;
};

// --- signature transitions (shared by the chart and canonical replay) ---

Sig seed_sig(int i, int ti, int ti1, int hyp2, bool order3) {
  Sig s;
  s.start = static_cast<int16_t>(i);
  s.end = static_cast<int16_t>(i + 1);
  s.minimal = true;
  s.tag_start = static_cast<int16_t>(ti);
  s.tag_end = static_cast<int16_t>(ti1);
  if (order3) {
    s.tag_start1 = static_cast<int16_t>(ti1);
    s.tag_end1 = static_cast<int16_t>(hyp2);
  }
  return s;
}

Sig concat_sig(const Sig& a, const Sig& b) {
  Sig s;
  s.start = a.start;
  s.end = b.end;
  s.left_has_parent = a.left_has_parent;
  s.right_has_parent = b.right_has_parent;
  s.minimal = false;
  s.tag_start = a.tag_start;
  s.tag_end = b.tag_end;
  s.tag_start1 = a.tag_start1;
  s.tag_end1 = b.tag_end1;
  // The endwords' links can't poke out of their operand, so their farthest
  // kids carry over unchanged.
  s.kid_of_left = a.kid_of_left;
  s.kid_of_right = b.kid_of_right;
  return s;
}

void apply_cover(Sig& s, bool parent_right) {
  if (parent_right) {
    s.left_has_parent = true;
    s.kid_of_right = s.tag_start;  // the left endword becomes m's farthest kid
  } else {
    s.right_has_parent = true;
    s.kid_of_left = s.tag_end;
  }
  s.minimal = true;
}

uint64_t checked_add(uint64_t x, uint64_t y, bool saturate) {
  uint64_t r;
  if (__builtin_add_overflow(x, y, &r)) {
    if (saturate) return UINT64_MAX;
    throw std::overflow_error("derivation count exceeds 64-bit range");
  }
  return r;
}

uint64_t checked_mul(uint64_t x, uint64_t y, bool saturate) {
  uint64_t r;
  if (__builtin_mul_overflow(x, y, &r)) {
    if (saturate) return UINT64_MAX;
    throw std::overflow_error("derivation count exceeds 64-bit range");
  }
  return r;
}

// Incremental score deltas, all expressed over signature fields plus the
// fixed word sequence, with per-sentence memoization of the hot lookups.
class DeltaScorer {
 public:
  DeltaScorer(const ModelParams& p, std::vector<int> word_ids, double seal_bias)
      : p_(p), wid_(std::move(word_ids)), bias_(seal_bias) {
    N_ = static_cast<int>(wid_.size());
    T_ = p_.tags.size();
    if (has_kid_chains(p_.kind) && static_cast<int64_t>(N_) * 2 * (T_ + 1) * T_ <= (1 << 24))
      stop_memo_.assign(static_cast<size_t>(N_) * 2 * (T_ + 1) * T_,
                        std::numeric_limits<double>::quiet_NaN());
  }

  double seed_score(int i, int ti, int ti1, int hyp2) const {
    if (!is_chain_kind(p_.kind)) return 0;
    return p_.chain_logp(ti, ti1, hyp2 < 0 ? p_.tag_bnd : hyp2, wid_[i]);
  }

  double cover_delta(int ppos, int cpos, int ptag, int ctag, int prev) const {
    TupleKey key = make_key(1, ppos, cpos, ptag, ctag, prev);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Dir d = cpos < ppos ? Dir::Left : Dir::Right;
    double v = 0;
    switch (p_.kind) {
      case ModelKind::A:
        v = p_.link_logp(d, prev, ptag, wid_[ppos], ctag, wid_[cpos], true);
        break;
      case ModelKind::B:
        v = p_.pspec_logp(ctag, wid_[cpos], flip(d), ptag) +
            p_.kid_tag_logp(d, prev, ptag, wid_[ppos], ctag);
        break;
      case ModelKind::C:
      case ModelKind::Cprime:
        v = p_.kid_event_logp(d, prev, ptag, wid_[ppos], ctag, wid_[cpos]);
        break;
      case ModelKind::X:
        v = 0;
        break;
    }
    memo_.emplace(key, v);
    return v;
  }

  double concat_delta(const Sig& a, const Sig& b) const {
    const int j = a.end;
    const int jtag = a.tag_end;
    switch (p_.kind) {
      case ModelKind::B:
      case ModelKind::C:
      case ModelKind::Cprime:
        return stop(Dir::Left, a.kid_of_right, j, jtag) +
               stop(Dir::Right, b.kid_of_left, j, jtag);
      case ModelKind::A: {
        double s = 0;
        bool linked_k =
            a.width() == 1 ? (a.left_has_parent || a.right_has_parent) : true;
        bool linked_m =
            b.width() == 1 ? (b.left_has_parent || b.right_has_parent) : b.minimal;
        if (!linked_k) s += nonlink_full(j, a.start, jtag, a.tag_start, a.kid_of_right);
        if (!linked_m) s += nonlink_full(j, b.end, jtag, b.tag_end, b.kid_of_left);
        const std::vector<double>& preL = ext_prefix(j, jtag, a.kid_of_right, Dir::Left);
        s += preL[a.start];
        const std::vector<double>& preR = ext_prefix(j, jtag, b.kid_of_left, Dir::Right);
        s += preR[N_ - 1] - preR[b.end + 1];
        return s;
      }
      case ModelKind::X:
        return 0;
    }
    return 0;
  }

  double accept_delta(const Sig& s, bool linked_eos_cover) const {
    switch (p_.kind) {
      case ModelKind::B:
      case ModelKind::C:
      case ModelKind::Cprime:
        return stop(Dir::Left, -1, 0, s.tag_start) +
               stop(Dir::Right, s.kid_of_left, 0, s.tag_start) +
               stop(Dir::Left, s.kid_of_right, N_ - 1, p_.tag_eos) +
               stop(Dir::Right, -1, N_ - 1, p_.tag_eos);
      case ModelKind::A:
        // The one EOS pair not handled elsewhere: (EOS, word 1) when word 1
        // is not the head. Its sibling context is the head's tag, which the
        // accepting signature carries.
        if (!linked_eos_cover)
          return nonlink_full(N_ - 1, 0, p_.tag_eos, s.tag_start, s.kid_of_right);
        return 0;
      case ModelKind::X:
        return 0;
    }
    return 0;
  }

 private:
  double stop(Dir d, int prev, int pos, int ptag) const {
    if (!stop_memo_.empty()) {
      size_t idx =
          ((static_cast<size_t>(pos) * 2 + static_cast<size_t>(d)) * (T_ + 1) + (prev + 1)) * T_ +
          ptag;
      double v = stop_memo_[idx];
      if (!std::isnan(v)) return v;
      v = p_.kid_stop_logp(d, prev, ptag, wid_[pos]) + bias_;
      stop_memo_[idx] = v;
      return v;
    }
    return p_.kid_stop_logp(d, prev, ptag, wid_[pos]) + bias_;
  }

  double nonlink_full(int ppos, int cpos, int ptag, int ctag, int prev) const {
    TupleKey key = make_key(2, ppos, cpos, ptag, ctag, prev);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Dir d = cpos < ppos ? Dir::Left : Dir::Right;
    double v = p_.link_logp(d, prev, ptag, wid_[ppos], ctag, wid_[cpos], false);
    memo_.emplace(key, v);
    return v;
  }

  // prefix[x] = sum over real positions c < x of the word-only non-link
  // factor with j as parent; prefix.size() == N_+1 and the EOS position
  // contributes nothing.
  const std::vector<double>& ext_prefix(int jpos, int jtag, int prev, Dir d) const {
    TupleKey key = make_key(3, jpos, jtag, prev, static_cast<int>(d));
    auto it = ext_memo_.find(key);
    if (it != ext_memo_.end()) return it->second;
    std::vector<double> pre(N_ + 1, 0.0);
    for (int c = 0; c < N_; ++c) {
      double f = c <= N_ - 2
                     ? p_.linkword_logp(d, prev, jtag, wid_[jpos], wid_[c], false)
                     : 0.0;
      pre[c + 1] = pre[c] + f;
    }
    return ext_memo_.emplace(key, std::move(pre)).first->second;
  }

  const ModelParams& p_;
  std::vector<int> wid_;
  double bias_;
  int N_ = 0, T_ = 0;
  mutable std::vector<double> stop_memo_;
  mutable std::unordered_map<TupleKey, double, TupleKeyHash> memo_;
  mutable std::unordered_map<TupleKey, std::vector<double>, TupleKeyHash> ext_memo_;
};

uint64_t left_key(int16_t tag_start, int16_t tag_start1, bool lhp) {
  return (static_cast<uint64_t>(static_cast<uint16_t>(tag_start)) << 32) |
         (static_cast<uint64_t>(static_cast<uint16_t>(tag_start1)) << 8) | (lhp ? 1 : 0);
}

struct Cell {
  std::vector<int32_t> ids;
  // Grouped by (tag_start, tag_start1, left_has_parent): everything a left
  // operand needs to check against its own end fields.
  std::unordered_map<uint64_t, std::vector<int32_t>> by_left;

  void add(int32_t id, const Sig& s) {
    ids.push_back(id);
    by_left[left_key(s.tag_start, s.tag_start1, s.left_has_parent)].push_back(id);
  }
};

class Chart {
 public:
  Chart(int N, bool counting, bool order3, int eos_tag, int bnd_tag,
        std::vector<std::vector<int>> cands, const DeltaScorer* ds, double tie_eps,
        std::vector<int> tag_rank, bool saturate = false)
      : N_(N),
        counting_(counting),
        saturate_(saturate),
        order3_(order3),
        cands_(std::move(cands)),
        ds_(ds),
        eps_(tie_eps),
        rank_(std::move(tag_rank)),
        eos_cand_{eos_tag},
        bnd_cand_{bnd_tag},
        cells_(static_cast<size_t>(N) * N) {}

  void build() {
    seed_all();
    for (int w = 2; w <= N_ - 1; ++w)
      for (int k = 0; k + w <= N_ - 1; ++k) {
        const int m = k + w;
        for (int j = k + 1; j < m; ++j) {
          Cell& ca = cell(k, j);
          Cell& cb = cell(j, m);
          const size_t na = ca.ids.size();
          for (size_t x = 0; x < na; ++x) {
            const int32_t ai = ca.ids[x];
            const Sig sa = arena_[ai].sig;
            if (!sa.minimal) continue;
            auto it = cb.by_left.find(left_key(sa.tag_end, sa.tag_end1, !sa.right_has_parent));
            if (it == cb.by_left.end()) continue;
            const std::vector<int32_t>& bs = it->second;
            const size_t nb = bs.size();
            for (size_t y = 0; y < nb; ++y) combine(ai, bs[y]);
          }
        }
      }
    finalize_stats();
  }

  // Best accepting span id, -1 if none.
  int32_t best_accepting() const {
    int32_t best = -1;
    for (int32_t id : cell_const(0, N_ - 1).ids) {
      if (!arena_[id].sig.left_has_parent) continue;
      if (best < 0) {
        best = id;
        continue;
      }
      double d = arena_[id].score - arena_[best].score;
      if (d > eps_)
        best = id;
      else if (d >= -eps_ && structural_compare(arena_[id], arena_[best]) < 0)
        best = id;
    }
    return best;
  }

  uint64_t accepted_count() const {
    uint64_t total = 0;
    for (int32_t id : cell_const(0, N_ - 1).ids)
      if (arena_[id].sig.left_has_parent) total = checked_add(total, arena_[id].count, saturate_);
    return total;
  }

  void rebuild(int32_t id, std::vector<int>& par, std::vector<int>& tag) const {
    rebuild_rec(arena_[id], par, tag);
  }

  double score_of(int32_t id) const { return arena_[id].score; }
  const ChartStats& stats() const { return stats_; }
  const std::vector<SpanRec>& arena() const { return arena_; }

 private:
  Cell& cell(int s, int e) { return cells_[static_cast<size_t>(s) * N_ + e]; }
  const Cell& cell_const(int s, int e) const { return cells_[static_cast<size_t>(s) * N_ + e]; }

  // Candidate tags for a position; EOS and everything beyond are fixed.
  const std::vector<int>& cand_at(int i) const {
    if (i < N_ - 1) return cands_[i];
    return i == N_ - 1 ? eos_cand_ : bnd_cand_;
  }

  void seed_all() {
    std::vector<int> no_hyp{-1};
    for (int i = 0; i + 1 <= N_ - 1; ++i) {
      for (int ti : cand_at(i))
        for (int ti1 : cand_at(i + 1)) {
          const std::vector<int>& hyps = order3_ ? cand_at(i + 2) : no_hyp;
          for (int hyp : hyps) {
            Sig s0 = seed_sig(i, ti, ti1, hyp, order3_);
            double sc = counting_ ? 0 : ds_->seed_score(i, ti, ti1, hyp);
            offer(s0, sc, 1, -1, -1, kNoCover);
            if (i + 1 != N_ - 1) {  // the EOS mark never takes a parent
              Sig sL = s0;
              apply_cover(sL, false);
              double cd = counting_ ? 0 : ds_->cover_delta(i, i + 1, ti, ti1, -1);
              offer(sL, sc + cd, 1, -1, -1, kLeftParent);
            }
            Sig sR = s0;
            apply_cover(sR, true);
            double cd = counting_ ? 0 : ds_->cover_delta(i + 1, i, ti1, ti, -1);
            offer(sR, sc + cd, 1, -1, -1, kRightParent);
          }
        }
    }
  }

  void combine(int32_t ai, int32_t bi) {
    ++stats_.combinations;
    const SpanRec a = arena_[ai];  // by value: offers may grow the arena
    const SpanRec b = arena_[bi];
    Sig base = concat_sig(a.sig, b.sig);
    double delta = counting_ ? 0 : ds_->concat_delta(a.sig, b.sig);
    double score = a.score + b.score + delta;
    uint64_t cnt = counting_ ? checked_mul(a.count, b.count, saturate_) : 1;
    offer(base, score, cnt, ai, bi, kNoCover);

    // Covering links are barred once either new endword has a parent.
    if (a.sig.left_has_parent || b.sig.right_has_parent) return;
    const int k = base.start, m = base.end;
    if (m != N_ - 1) {  // the EOS mark never takes a parent
      Sig s2 = base;
      apply_cover(s2, false);
      double cd =
          counting_ ? 0 : ds_->cover_delta(k, m, base.tag_start, base.tag_end, base.kid_of_left);
      offer(s2, score + cd, cnt, ai, bi, kLeftParent);
    }
    // The EOS mark takes exactly one kid; a second covering link into it is
    // structurally barred.
    if (m != N_ - 1 || b.sig.kid_of_right < 0) {
      Sig s2 = base;
      apply_cover(s2, true);
      double cd =
          counting_ ? 0 : ds_->cover_delta(m, k, base.tag_end, base.tag_start, base.kid_of_right);
      offer(s2, score + cd, cnt, ai, bi, kRightParent);
    }
  }

  void offer(const Sig& sig, double score, uint64_t cnt, int32_t ai, int32_t bi, int8_t cover) {
    ++stats_.spans_built;
    if (!counting_ && sig.start == 0 && sig.end == N_ - 1 && sig.left_has_parent)
      score += ds_->accept_delta(sig, cover != kNoCover);
    auto [it, fresh] = index_.try_emplace(sig, static_cast<int32_t>(arena_.size()));
    if (fresh) {
      arena_.push_back({sig, score, cnt, ai, bi, cover});
      cell(sig.start, sig.end).add(it->second, sig);
      ++stats_.cells_stored;
      return;
    }
    SpanRec& ex = arena_[it->second];
    if (counting_) {
      ex.count = checked_add(ex.count, cnt, saturate_);
      return;
    }
    double d = score - ex.score;
    bool take = false;
    if (d > eps_)
      take = true;
    else if (d >= -eps_) {
      SpanRec cand{sig, score, cnt, ai, bi, cover};
      take = structural_compare(cand, ex) < 0;
    }
    if (take) ex = {sig, score, cnt, ai, bi, cover};
  }

  void rebuild_rec(const SpanRec& r, std::vector<int>& par, std::vector<int>& tag) const {
    if (r.sig.width() == 1) {
      tag[r.sig.start] = r.sig.tag_start;
      tag[r.sig.end] = r.sig.tag_end;
    } else {
      rebuild_rec(arena_[r.a], par, tag);
      rebuild_rec(arena_[r.b], par, tag);
    }
    if (r.cover == kLeftParent)
      par[r.sig.end] = r.sig.start;
    else if (r.cover == kRightParent)
      par[r.sig.start] = r.sig.end;
  }

  // Lexicographic (parent array, tag string sequence) order over the two
  // records' reconstructed structures; same-signature slots always align.
  int structural_compare(const SpanRec& x, const SpanRec& y) const {
    std::vector<int> px(N_, -1), tx(N_, -1), py(N_, -1), ty(N_, -1);
    rebuild_rec(x, px, tx);
    rebuild_rec(y, py, ty);
    for (int i = 0; i < N_; ++i)
      if (px[i] != py[i]) return px[i] < py[i] ? -1 : 1;
    for (int i = 0; i < N_; ++i) {
      int rx = tx[i] < 0 ? -1 : rank_[tx[i]];
      int ry = ty[i] < 0 ? -1 : rank_[ty[i]];
      if (rx != ry) return rx < ry ? -1 : 1;
    }
    return 0;
  }

  void finalize_stats() {
    for (int s = 0; s < N_; ++s)
      for (int e = s + 1; e < N_; ++e) {
        const Cell& c = cell_const(s, e);
        uint64_t n = c.ids.size();
        stats_.max_cell_signatures = std::max(stats_.max_cell_signatures, n);
        uint64_t& wmax = stats_.width_max_signatures[e - s];
        wmax = std::max(wmax, n);
      }
  }

  const int N_;
  const bool counting_;
  const bool saturate_;
  const bool order3_;
  std::vector<std::vector<int>> cands_;
  const DeltaScorer* ds_;
  const double eps_;
  std::vector<int> rank_;
  const std::vector<int> eos_cand_, bnd_cand_;

  std::vector<SpanRec> arena_;
  std::unordered_map<Sig, int32_t, SigHash> index_;
  std::vector<Cell> cells_;
  ChartStats stats_;
};

std::vector<std::vector<int>> candidate_ids(const std::vector<std::string>& words,
                                            const Lexicon& lex, int cap, const Vocab& tags) {
  std::vector<std::vector<int>> out(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    for (const std::string& t : lex.candidates(words[i], cap)) {
      int id = tags.find(t);
      if (id < 0) throw std::logic_error("lexicon tag '" + t + "' missing from model vocabulary");
      out[i].push_back(id);
    }
  }
  return out;
}

}  // namespace

ParseResult parse_sentence(const std::vector<std::string>& words, const ModelParams& p,
                           const ParseOptions& opts) {
  ParseResult res;
  if (words.empty()) {
    res.error = "empty sentence";
    return res;
  }
  const int N = static_cast<int>(words.size()) + 1;

  std::vector<int> wid(N);
  for (int i = 0; i < N - 1; ++i) wid[i] = p.word_id(words[i]);
  wid[N - 1] = p.word_eos;

  DeltaScorer ds(p, wid, opts.debug_seal_bias);
  bool order3 = is_chain_kind(p.kind) && p.markov_order >= 3;
  Chart chart(N, /*counting=*/false, order3, p.tag_eos, p.tag_bnd,
              candidate_ids(words, p.lexicon, opts.tag_cap, p.tags), &ds, opts.tie_eps,
              p.tags.lex_rank());
  chart.build();
  res.stats = chart.stats();

  int32_t best = chart.best_accepting();
  if (best < 0) {
    res.error = "no accepting span (internal error)";
    return res;
  }
  std::vector<int> par(N, -1), tag(N, -1);
  chart.rebuild(best, par, tag);

  res.sentence.words = words;
  res.sentence.words.emplace_back(kEosSym);
  res.sentence.tags.resize(N);
  for (int i = 0; i < N; ++i) res.sentence.tags[i] = p.tags.str(tag[i]);
  res.sentence.parent = par;
  res.logscore = chart.score_of(best);
  res.ok = true;
  return res;
}

uint64_t count_derivations(const std::vector<std::string>& words, const Lexicon& lex,
                           int tag_cap, ChartStats* stats) {
  if (words.empty()) return 0;
  const int N = static_cast<int>(words.size()) + 1;
  Vocab tags;
  int eos = tags.intern(kEosSym);
  int bnd = tags.intern(kBoundarySym);
  std::vector<std::vector<int>> cands(words.size());
  for (size_t i = 0; i < words.size(); ++i)
    for (const std::string& t : lex.candidates(words[i], tag_cap))
      cands[i].push_back(tags.intern(t));

  Chart chart(N, /*counting=*/true, /*order3=*/false, eos, bnd, std::move(cands), nullptr, 0,
              {});
  chart.build();
  if (stats) *stats = chart.stats();
  return chart.accepted_count();
}

ChartStats survey_chart(const std::vector<std::string>& words, const Lexicon& lex, int tag_cap) {
  if (words.empty()) return {};
  const int N = static_cast<int>(words.size()) + 1;
  Vocab tags;
  int eos = tags.intern(kEosSym);
  int bnd = tags.intern(kBoundarySym);
  std::vector<std::vector<int>> cands(words.size());
  for (size_t i = 0; i < words.size(); ++i)
    for (const std::string& t : lex.candidates(words[i], tag_cap))
      cands[i].push_back(tags.intern(t));

  Chart chart(N, /*counting=*/true, /*order3=*/false, eos, bnd, std::move(cands), nullptr, 0, {},
              /*saturate=*/true);
  chart.build();
  return chart.stats();
}

double replay_score(const ModelParams& p, const Sentence& s, double debug_seal_bias) {
  StructureIds st = map_structure(p, s);
  const int N = st.size();
  for (int i = 0; i < N; ++i)
    if (st.tag[i] < 0) throw std::logic_error("replay_score: tag outside model vocabulary");
  DeltaScorer ds(p, st.word, debug_seal_bias);
  bool order3 = is_chain_kind(p.kind) && p.markov_order >= 3;

  std::vector<Sig> sig_stack;
  std::vector<double> score_stack;
  for (const DerivEvent& ev : canonical_derivation(s)) {
    switch (ev.type) {
      case DerivEvent::Type::Seed: {
        int i = ev.k;
        int hyp = order3 ? (i + 2 < N ? st.tag[i + 2] : p.tag_bnd) : -1;
        sig_stack.push_back(seed_sig(i, st.tag[i], st.tag[i + 1], hyp, order3));
        score_stack.push_back(ds.seed_score(i, st.tag[i], st.tag[i + 1], hyp));
        break;
      }
      case DerivEvent::Type::Cover: {
        Sig& top = sig_stack.back();
        bool pr = ev.parent_is_right;
        int prev = pr ? top.kid_of_right : top.kid_of_left;
        int ppos = pr ? top.end : top.start;
        int cpos = pr ? top.start : top.end;
        int ptag = pr ? top.tag_end : top.tag_start;
        int ctag = pr ? top.tag_start : top.tag_end;
        score_stack.back() += ds.cover_delta(ppos, cpos, ptag, ctag, prev);
        apply_cover(top, pr);
        break;
      }
      case DerivEvent::Type::Concat: {
        Sig b = sig_stack.back();
        sig_stack.pop_back();
        double sb = score_stack.back();
        score_stack.pop_back();
        Sig a = sig_stack.back();
        double delta = ds.concat_delta(a, b);
        sig_stack.back() = concat_sig(a, b);
        score_stack.back() += sb + delta;
        break;
      }
      case DerivEvent::Type::Accept: {
        score_stack.back() += ds.accept_delta(sig_stack.back(), s.parent[0] == N - 1);
        break;
      }
    }
  }
  return score_stack.back();
}

}  // namespace spandep
