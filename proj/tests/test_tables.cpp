#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "spandep/tables.hpp"

using namespace spandep;

TEST_CASE("counts and totals accumulate per context") {
  CountTable t(1, 1);
  t.observe(make_key(1), make_key(7));
  t.observe(make_key(1), make_key(7));
  CHECK(t.count(make_key(1), make_key(7)) == 2);
  CHECK(t.total(make_key(1)) == 2);

  t.observe(make_key(1), make_key(8));
  CHECK(t.count(make_key(1), make_key(8)) == 1);
  CHECK(t.total(make_key(1)) == 3);
  CHECK(t.alphabet_size() == 2);

  t.observe(make_key(2), make_key(7), 5);
  CHECK(t.total(make_key(2)) == 5);
  CHECK(t.total(make_key(1)) == 3);
  CHECK(t.count(make_key(3), make_key(7)) == 0);
  CHECK(t.total(make_key(3)) == 0);
  CHECK(t.cells().size() == 3);
  CHECK(!t.empty());
  CHECK(CountTable(2, 1).empty());
}

TEST_CASE("a replayed random stream matches an independent tally") {
  CountTable t(2, 1);
  std::map<std::pair<std::pair<int, int>, int>, int64_t> tally;
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    int a = static_cast<int>(rng() % 3), b = static_cast<int>(rng() % 3);
    int e = static_cast<int>(rng() % 4);
    int64_t w = 1 + static_cast<int64_t>(rng() % 3);
    t.observe(make_key(a, b), make_key(e), w);
    tally[{{a, b}, e}] += w;
  }
  std::map<std::pair<int, int>, int64_t> totals;
  for (const auto& [k, c] : tally) {
    CHECK(t.count(make_key(k.first.first, k.first.second), make_key(k.second)) == c);
    totals[k.first] += c;
  }
  for (const auto& [ctx, c] : totals) CHECK(t.total(make_key(ctx.first, ctx.second)) == c);
}

TEST_CASE("back-off resolves at the finest sufficiently observed level") {
  CountTable fine(2, 1);
  CountTable coarse(1, 1);
  // context (5,1) has total 12 with 3 of them event 9; context (5,2) has
  // total 9, just under a threshold of 10. The coarse table pools to 40.
  for (int i = 0; i < 12; ++i) fine.observe(make_key(5, 1), make_key(i < 3 ? 9 : 100 + i));
  for (int i = 0; i < 9; ++i) fine.observe(make_key(5, 2), make_key(i < 9 ? 9 : 0));
  for (int i = 0; i < 40; ++i) coarse.observe(make_key(5), make_key(i < 10 ? 9 : 200 + i));

  BackoffLevel at1[] = {{&fine, make_key(5, 1)}, {&coarse, make_key(5)}};
  CHECK(backoff_prob(at1, make_key(9), 10) == doctest::Approx(3.0 / 12.0));

  BackoffLevel at2[] = {{&fine, make_key(5, 2)}, {&coarse, make_key(5)}};
  CHECK(backoff_prob(at2, make_key(9), 10) == doctest::Approx(10.0 / 40.0));
}

TEST_CASE("threshold boundary: total 10 resolves, total 9 backs off") {
  CountTable fine(1, 1);
  CountTable coarse(0, 1);
  for (int i = 0; i < 10; ++i) fine.observe(make_key(1), make_key(i < 4 ? 7 : 50 + i));
  for (int i = 0; i < 9; ++i) fine.observe(make_key(2), make_key(i < 3 ? 7 : 80 + i));
  for (int i = 0; i < 100; ++i) coarse.observe(TupleKey{}, make_key(i < 90 ? 7 : 300 + i));

  BackoffLevel ten[] = {{&fine, make_key(1)}, {&coarse, TupleKey{}}};
  CHECK(backoff_prob(ten, make_key(7), 10) == doctest::Approx(0.4));

  BackoffLevel nine[] = {{&fine, make_key(2)}, {&coarse, TupleKey{}}};
  CHECK(backoff_prob(nine, make_key(7), 10) == doctest::Approx(0.9));
}

TEST_CASE("an unseen event skips an otherwise well-observed level") {
  CountTable fine(1, 1);
  CountTable coarse(0, 1);
  for (int i = 0; i < 20; ++i) fine.observe(make_key(1), make_key(100 + i));  // never event 7
  for (int i = 0; i < 10; ++i) coarse.observe(TupleKey{}, make_key(i < 2 ? 7 : 100 + i));
  BackoffLevel lv[] = {{&fine, make_key(1)}, {&coarse, TupleKey{}}};
  CHECK(backoff_prob(lv, make_key(7), 10) == doctest::Approx(0.2));
}

TEST_CASE("terminal uniform floor uses the coarsest alphabet or an explicit one") {
  CountTable fine(1, 1);
  CountTable coarse(0, 1);
  for (int i = 0; i < 8; ++i) coarse.observe(TupleKey{}, make_key(i), 1);  // 8 distinct, total 8 < 10
  BackoffLevel lv[] = {{&fine, make_key(1)}, {&coarse, TupleKey{}}};
  CHECK(backoff_prob(lv, make_key(0), 10) == doctest::Approx(1.0 / 8.0));

  CountTable binary(1, 1);
  BackoffLevel blv[] = {{&binary, make_key(1)}};
  CHECK(backoff_prob(blv, make_key(1), 10, 2) == doctest::Approx(0.5));
}

TEST_CASE("back-off is strictly positive for arbitrary queries") {
  CountTable fine(2, 1);
  CountTable coarse(1, 1);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 60; ++i) {
    TupleKey ctx = make_key(static_cast<int>(rng() % 4), static_cast<int>(rng() % 4));
    TupleKey ev = make_key(static_cast<int>(rng() % 6));
    fine.observe(ctx, ev);
    coarse.observe(make_key(ctx.f[0]), ev);
  }
  for (int i = 0; i < 200; ++i) {
    int a = static_cast<int>(rng() % 6) - 1;  // includes -1 (OOV)
    int b = static_cast<int>(rng() % 6) - 1;
    int e = static_cast<int>(rng() % 8) - 1;
    BackoffLevel lv[] = {{&fine, make_key(a, b)}, {&coarse, make_key(a)}};
    double p = backoff_prob(lv, make_key(e), 10);
    CHECK(p > 0.0);
    CHECK(p <= 1.0);
  }
}
