#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace chronograph::timex {

enum class TimeXCategory { In, Between, Before, After };

const char* to_string(TimeXCategory c);

// Closed interval of fractional years. Before leaves start at -inf,
// After leaves end at +inf; In/Between are finite on both sides.
struct TimeInterval {
  double start = 0.0;
  double end = 0.0;

  bool finite() const {
    return start != -std::numeric_limits<double>::infinity() &&
           end != std::numeric_limits<double>::infinity();
  }
  bool operator==(const TimeInterval&) const = default;
};

inline double neg_inf() { return -std::numeric_limits<double>::infinity(); }
inline double pos_inf() { return std::numeric_limits<double>::infinity(); }

// A calendar date at year or month granularity. month == 0 means bare year.
struct Date {
  int year = 0;
  int month = 0;
};

// point(Y) = Y, point(m, Y) = Y + m/12 with 1-based months (March -> +0.25).
double date_point(const Date& d);

TimeInterval normalize(TimeXCategory category, const Date& first,
                       const std::optional<Date>& second = std::nullopt);

struct TimeXMention {
  std::string surface;
  TimeXCategory category = TimeXCategory::In;
  TimeInterval interval;
  int begin = 0;  // [begin, end) char span in the source sentence
  int end = 0;
  int chunk = -1;  // filled by the pipeline
  int sentence = -1;
};

// All non-overlapping matches, left to right, longest match first.
std::vector<TimeXMention> extract_timex(const std::string& sentence);

enum class TemporalRelation { Before, After, Overlap };

const char* to_string(TemporalRelation r);

// Before iff a ends strictly before b starts; After is the mirror image;
// anything else, including touching endpoints, is Overlap.
TemporalRelation relation(const TimeInterval& a, const TimeInterval& b);

// True iff inner lies entirely within outer (closed-interval containment).
bool contains(const TimeInterval& outer, const TimeInterval& inner);

// Whether a fact holding over `fact` answers a question constrained by
// (category, question): In/Between ask that the fact covers the question
// span; Before/After ask that the fact falls inside the unbounded range.
bool satisfies(TimeXCategory category, const TimeInterval& question, const TimeInterval& fact);

struct PairLabel {
  int i = 0;
  int j = 0;  // i < j, indices into the fact-node order
  TemporalRelation label = TemporalRelation::Overlap;

  bool operator==(const PairLabel&) const = default;
};

// One label per unordered pair of present intervals, sorted by (i, j).
std::vector<PairLabel> label_pairs(const std::vector<std::optional<TimeInterval>>& fact_intervals);

// Month helpers shared by the extractor and the question perturbation.
// month is 1-based; names are capitalized English month names.
const std::vector<std::string>& month_names();
// Wording for a point on the 1/12 grid: "1954" or "March 1954" (December of
// the previous year is used when the point lands exactly on a year boundary
// but a month form is required).
std::string point_surface(double grid_point);

}  // namespace chronograph::timex
