#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <limits>

#include "chronograph/errors.hpp"
#include "chronograph/rng.hpp"
#include "chronograph/timex.hpp"

using namespace chronograph;
using timex::TemporalRelation;
using timex::TimeInterval;
using timex::TimeXCategory;

namespace {

// Independent oracle: closed intervals with endpoints in exact integer
// twelfths of a year (or +-infinity), compared with integer arithmetic only.
struct GridInterval {
  bool start_inf = false;  // start = -inf
  bool end_inf = false;    // end = +inf
  long start = 0;          // twelfths
  long end = 0;
};

int oracle_relation(const GridInterval& a, const GridInterval& b) {
  // 0 = before, 1 = after, 2 = overlap
  const bool a_end_lt_b_start = !a.end_inf && !b.start_inf && a.end < b.start;
  if (a_end_lt_b_start) return 0;
  const bool a_start_gt_b_end = !a.start_inf && !b.end_inf && a.start > b.end;
  if (a_start_gt_b_end) return 1;
  return 2;
}

TimeInterval to_interval(const GridInterval& g) {
  TimeInterval iv;
  iv.start = g.start_inf ? timex::neg_inf() : (g.start / 12) + (g.start % 12) / 12.0;
  iv.end = g.end_inf ? timex::pos_inf() : (g.end / 12) + (g.end % 12) / 12.0;
  return iv;
}

int relation_code(TemporalRelation r) {
  switch (r) {
    case TemporalRelation::Before: return 0;
    case TemporalRelation::After: return 1;
    case TemporalRelation::Overlap: return 2;
  }
  return -1;
}

GridInterval random_grid_interval(Rng& rng) {
  // Years 1900..2020 at 1/12 step; occasionally unbounded on one side.
  const long lo = 1900 * 12, hi = 2020 * 12;
  GridInterval g;
  const auto shape = rng.below(10);
  if (shape == 0) {
    g.start_inf = true;
    g.end = rng.range(lo, hi);
    g.start = g.end;  // unused
  } else if (shape == 1) {
    g.end_inf = true;
    g.start = rng.range(lo, hi);
    g.end = g.start;
  } else {
    g.start = rng.range(lo, hi);
    g.end = rng.range(g.start, hi);
  }
  return g;
}

}  // namespace

TEST_CASE("normalize reproduces the published interval examples") {
  // between 1923 and 1924 -> [1923, 1924]
  auto iv = timex::normalize(TimeXCategory::Between, {1923, 0}, timex::Date{1924, 0});
  CHECK(iv.start == doctest::Approx(1923.0));
  CHECK(iv.end == doctest::Approx(1924.0));

  // between 1980 and March 1988 -> [1980, 1988.25]
  iv = timex::normalize(TimeXCategory::Between, {1980, 0}, timex::Date{1988, 3});
  CHECK(iv.start == doctest::Approx(1980.0));
  CHECK(iv.end == doctest::Approx(1988.25));

  // before March 1988 -> [-inf, 1988.25]
  iv = timex::normalize(TimeXCategory::Before, {1988, 3});
  CHECK(iv.start == timex::neg_inf());
  CHECK(iv.end == doctest::Approx(1988.25));
}

TEST_CASE("normalize granularity and error cases") {
  auto iv = timex::normalize(TimeXCategory::In, {1999, 0});
  CHECK(iv.start == doctest::Approx(1999.0));
  CHECK(iv.end == doctest::Approx(2000.0));

  iv = timex::normalize(TimeXCategory::In, {1955, 12});  // in December 1955
  CHECK(iv.start == doctest::Approx(1956.0));
  CHECK(iv.end == doctest::Approx(1956.0 + 1.0 / 12.0));

  iv = timex::normalize(TimeXCategory::After, {2010, 6});
  CHECK(iv.start == doctest::Approx(2010.5));
  CHECK(iv.end == timex::pos_inf());

  CHECK_THROWS_AS(timex::normalize(TimeXCategory::Between, {1999, 0}, timex::Date{1950, 0}),
                  ValidationError);
  CHECK_THROWS_AS(timex::normalize(TimeXCategory::Between, {1999, 0}), ValidationError);
}

TEST_CASE("extract_timex finds and normalizes the documented forms") {
  auto ms = timex::extract_timex("Between 1980 and March 1988 he taught.");
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].category == TimeXCategory::Between);
  CHECK(ms[0].surface == "Between 1980 and March 1988");
  CHECK(ms[0].interval.start == doctest::Approx(1980.0));
  CHECK(ms[0].interval.end == doctest::Approx(1988.25));

  ms = timex::extract_timex("In 1999 he retired.");
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].category == TimeXCategory::In);
  CHECK(ms[0].interval.start == doctest::Approx(1999.0));
  CHECK(ms[0].interval.end == doctest::Approx(2000.0));

  CHECK(timex::extract_timex("He was happy.").empty());

  ms = timex::extract_timex("before March 1988");
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].category == TimeXCategory::Before);
  CHECK(ms[0].interval.start == timex::neg_inf());
  CHECK(ms[0].interval.end == doctest::Approx(1988.25));
}

TEST_CASE("extract_timex covers the remaining grammar") {
  auto ms = timex::extract_timex(
      "He was a member of the House ( 1966-1968 ) and Secretary of State ( 1968-1973 ).");
  REQUIRE(ms.size() == 2);
  CHECK(ms[0].category == TimeXCategory::Between);
  CHECK(ms[0].interval.start == doctest::Approx(1966.0));
  CHECK(ms[0].interval.end == doctest::Approx(1968.0));
  CHECK(ms[1].interval.end == doctest::Approx(1973.0));

  ms = timex::extract_timex("He worked there from 1970 to March 1975.");
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].category == TimeXCategory::Between);
  CHECK(ms[0].interval.start == doctest::Approx(1970.0));
  CHECK(ms[0].interval.end == doctest::Approx(1975.25));

  // Day-of-month tokens are consumed but ignored.
  ms = timex::extract_timex("Byrd died in June 2010.");
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].interval.start == doctest::Approx(2010.5));
  ms = timex::extract_timex("He resigned before 24 May 2010.");
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].category == TimeXCategory::Before);
  CHECK(ms[0].interval.end == doctest::Approx(2010.0 + 5.0 / 12.0));

  // Vague decade expressions are not matched.
  CHECK(timex::extract_timex("He was famous in the 1990s.").empty());

  // Unnormalizable (inverted) ranges are skipped without error.
  CHECK(timex::extract_timex("between 1999 and 1950 nothing happened").empty());

  // Abbreviated months from the perturbation examples.
  ms = timex::extract_timex("between Oct 1966 and Dec 1967");
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].interval.start == doctest::Approx(1966.0 + 10.0 / 12.0));
  CHECK(ms[0].interval.end == doctest::Approx(1967.0 + 12.0 / 12.0));
}

TEST_CASE("extraction span fidelity and non-overlap") {
  const std::string text =
      "Between 1980 and March 1988 he taught, before 1990 he wrote, in 1999 he retired.";
  const auto ms = timex::extract_timex(text);
  REQUIRE(ms.size() == 3);
  int prev_end = -1;
  for (const auto& m : ms) {
    CHECK(m.surface == text.substr(m.begin, m.end - m.begin));
    CHECK(m.begin >= prev_end);
    prev_end = m.end;
  }
}

TEST_CASE("relation matches the documented examples") {
  const TimeInterval a{1923, 1924};
  const TimeInterval b{1980, 1988.25};
  CHECK(timex::relation(a, b) == TemporalRelation::Before);
  CHECK(timex::relation(b, a) == TemporalRelation::After);
  CHECK(timex::relation({1954, 1956}, {1954.75, 1955}) == TemporalRelation::Overlap);
  // Shared endpoints are overlap.
  CHECK(timex::relation({1923, 1924}, {1924, 1925}) == TemporalRelation::Overlap);
}

TEST_CASE("relation agrees with the exact grid oracle") {
  Rng rng(20240817);
  for (int trial = 0; trial < 10000; ++trial) {
    const GridInterval ga = random_grid_interval(rng);
    const GridInterval gb = random_grid_interval(rng);
    const TimeInterval a = to_interval(ga);
    const TimeInterval b = to_interval(gb);
    const int got = relation_code(timex::relation(a, b));
    const int want = oracle_relation(ga, gb);
    REQUIRE(got == want);

    // Trichotomy plus antisymmetry against the oracle in the mirror direction.
    const int mirrored = relation_code(timex::relation(b, a));
    if (got == 0) CHECK(mirrored == 1);
    if (got == 1) CHECK(mirrored == 0);
    if (got == 2) CHECK(mirrored == 2);
  }
}

TEST_CASE("relation is reflexive on finite intervals") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    GridInterval g = random_grid_interval(rng);
    g.start_inf = g.end_inf = false;
    if (g.end < g.start) std::swap(g.start, g.end);
    const TimeInterval a = to_interval(g);
    CHECK(timex::relation(a, a) == TemporalRelation::Overlap);
  }
}

TEST_CASE("label_pairs counts and orders") {
  std::vector<std::optional<TimeInterval>> xs;
  xs.push_back(TimeInterval{1923, 1924});
  xs.push_back(TimeInterval{1980, 1988.25});
  auto pairs = timex::label_pairs(xs);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].i == 0);
  CHECK(pairs[0].j == 1);
  CHECK(pairs[0].label == TemporalRelation::Before);

  // One present interval -> no pairs.
  xs.assign(3, std::nullopt);
  xs[1] = TimeInterval{1950, 1951};
  CHECK(timex::label_pairs(xs).empty());

  // N(N-1)/2 law, including absent entries that are skipped.
  Rng rng(99);
  for (int n = 1; n <= 20; ++n) {
    std::vector<std::optional<TimeInterval>> intervals;
    for (int i = 0; i < n; ++i) {
      const double s = 1900 + static_cast<double>(rng.below(100));
      intervals.push_back(TimeInterval{s, s + 1 + static_cast<double>(rng.below(5))});
    }
    const auto got = timex::label_pairs(intervals);
    CHECK(static_cast<int>(got.size()) == n * (n - 1) / 2);
    for (std::size_t p = 1; p < got.size(); ++p) {
      const bool ordered = got[p - 1].i < got[p].i ||
                           (got[p - 1].i == got[p].i && got[p - 1].j < got[p].j);
      CHECK(ordered);
    }
  }
}

TEST_CASE("satisfies covers the four constraint shapes") {
  const TimeInterval fact{1970, 1975};
  CHECK(timex::satisfies(TimeXCategory::In, {1971, 1972}, fact));
  CHECK_FALSE(timex::satisfies(TimeXCategory::In, {1975, 1976}, fact));
  CHECK(timex::satisfies(TimeXCategory::Between, {1970, 1975}, fact));
  CHECK_FALSE(timex::satisfies(TimeXCategory::Between, {1969, 1972}, fact));
  CHECK(timex::satisfies(TimeXCategory::Before, {timex::neg_inf(), 1975}, fact));
  CHECK_FALSE(timex::satisfies(TimeXCategory::Before, {timex::neg_inf(), 1974}, fact));
  CHECK(timex::satisfies(TimeXCategory::After, {1970, timex::pos_inf()}, fact));
  CHECK_FALSE(timex::satisfies(TimeXCategory::After, {1971, timex::pos_inf()}, fact));
}

TEST_CASE("point_surface renders grid points") {
  CHECK(timex::point_surface(1954.0) == "1954");
  CHECK(timex::point_surface(1954.25) == "March 1954");
  CHECK(timex::point_surface(1954.0 + 11.0 / 12.0) == "November 1954");
}
