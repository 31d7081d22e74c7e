#include "chronograph/timex.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>

#include "chronograph/errors.hpp"

namespace chronograph::timex {

namespace {

const char* kDate =
    "(?:(\\d{1,2})\\s+)?"                                      // day before month
    "(?:(January|February|March|April|May|June|July|August|September|October|"
    "November|December|Jan|Feb|Mar|Apr|Jun|Jul|Aug|Sept|Sep|Oct|Nov|Dec)\\.?\\s+)?"
    "(?:(\\d{1,2}),?\\s+)?"                                    // day after month
    "(\\d{3,4})\\b";

int month_index(const std::string& name) {
  static const char* kPrefix[12] = {"jan", "feb", "mar", "apr", "may", "jun",
                                    "jul", "aug", "sep", "oct", "nov", "dec"};
  std::string lower;
  for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (int m = 0; m < 12; ++m) {
    if (lower.rfind(kPrefix[m], 0) == 0) return m + 1;
  }
  return 0;
}

Date date_from(const std::smatch& m, int base) {
  Date d;
  if (m[base + 1].matched) d.month = month_index(m[base + 1].str());
  d.year = std::stoi(m[base + 3].str());
  return d;
}

struct Pattern {
  std::regex re;
  // Builds (category, first, second) from a match.
  TimeXCategory category;
  bool two_dates;
  bool parens;
};

const std::vector<Pattern>& patterns() {
  static const std::vector<Pattern> pats = [] {
    auto flags = std::regex::ECMAScript | std::regex::icase | std::regex::optimize;
    std::vector<Pattern> v;
    v.push_back({std::regex(std::string("\\bbetween\\s+") + kDate + "\\s+and\\s+" + kDate, flags),
                 TimeXCategory::Between, true, false});
    v.push_back({std::regex(std::string("\\bfrom\\s+") + kDate + "\\s+to\\s+" + kDate, flags),
                 TimeXCategory::Between, true, false});
    v.push_back({std::regex("\\(\\s*(\\d{3,4})\\s*(?:-|–|—)\\s*(\\d{3,4})\\s*\\)", flags),
                 TimeXCategory::Between, true, true});
    v.push_back({std::regex(std::string("\\b(in|before|after)\\s+") + kDate, flags),
                 TimeXCategory::In, false, false});
    return v;
  }();
  return pats;
}

}  // namespace

const char* to_string(TimeXCategory c) {
  switch (c) {
    case TimeXCategory::In: return "in";
    case TimeXCategory::Between: return "between";
    case TimeXCategory::Before: return "before";
    case TimeXCategory::After: return "after";
  }
  return "?";
}

const char* to_string(TemporalRelation r) {
  switch (r) {
    case TemporalRelation::Before: return "before";
    case TemporalRelation::After: return "after";
    case TemporalRelation::Overlap: return "overlap";
  }
  return "?";
}

double date_point(const Date& d) { return d.year + d.month / 12.0; }

TimeInterval normalize(TimeXCategory category, const Date& first,
                       const std::optional<Date>& second) {
  const double p = date_point(first);
  switch (category) {
    case TimeXCategory::In: {
      const double g = first.month == 0 ? 1.0 : 1.0 / 12.0;
      return {p, p + g};
    }
    case TimeXCategory::Before:
      return {neg_inf(), p};
    case TimeXCategory::After:
      return {p, pos_inf()};
    case TimeXCategory::Between: {
      if (!second.has_value()) throw ValidationError("between requires two dates");
      const double q = date_point(*second);
      if (p > q) throw ValidationError("inverted range");
      return {p, q};
    }
  }
  throw ValidationError("unknown category");
}

std::vector<TimeXMention> extract_timex(const std::string& sentence) {
  std::vector<TimeXMention> out;
  std::size_t pos = 0;
  while (pos < sentence.size()) {
    int best_pat = -1;
    std::size_t best_start = 0, best_len = 0;
    std::smatch best_match;
    for (std::size_t p = 0; p < patterns().size(); ++p) {
      std::smatch m;
      if (!std::regex_search(sentence.cbegin() + pos, sentence.cend(), m, patterns()[p].re))
        continue;
      const std::size_t start = pos + static_cast<std::size_t>(m.position(0));
      const std::size_t len = static_cast<std::size_t>(m.length(0));
      if (best_pat < 0 || start < best_start || (start == best_start && len > best_len)) {
        best_pat = static_cast<int>(p);
        best_start = start;
        best_len = len;
        best_match = m;
      }
    }
    if (best_pat < 0) break;

    const Pattern& pat = patterns()[best_pat];
    TimeXMention mention;
    mention.begin = static_cast<int>(best_start);
    mention.end = static_cast<int>(best_start + best_len);
    mention.surface = sentence.substr(best_start, best_len);
    try {
      if (pat.parens) {
        Date d1{std::stoi(best_match[1].str()), 0};
        Date d2{std::stoi(best_match[2].str()), 0};
        mention.category = TimeXCategory::Between;
        mention.interval = normalize(mention.category, d1, d2);
      } else if (pat.two_dates) {
        Date d1 = date_from(best_match, 0);
        Date d2 = date_from(best_match, 4);
        mention.category = TimeXCategory::Between;
        mention.interval = normalize(mention.category, d1, d2);
      } else {
        std::string kw = best_match[1].str();
        for (char& c : kw) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        mention.category = kw == "in"       ? TimeXCategory::In
                           : kw == "before" ? TimeXCategory::Before
                                            : TimeXCategory::After;
        Date d = date_from(best_match, 1);
        mention.interval = normalize(mention.category, d);
      }
      out.push_back(std::move(mention));
    } catch (const ValidationError&) {
      // Unnormalizable match (e.g. inverted range): skip it.
    }
    pos = best_start + best_len;
  }
  return out;
}

TemporalRelation relation(const TimeInterval& a, const TimeInterval& b) {
  if (a.end < b.start) return TemporalRelation::Before;
  if (a.start > b.end) return TemporalRelation::After;
  return TemporalRelation::Overlap;
}

bool contains(const TimeInterval& outer, const TimeInterval& inner) {
  return outer.start <= inner.start && inner.end <= outer.end;
}

bool satisfies(TimeXCategory category, const TimeInterval& question, const TimeInterval& fact) {
  if (category == TimeXCategory::In || category == TimeXCategory::Between)
    return contains(fact, question);
  return contains(question, fact);
}

std::vector<PairLabel> label_pairs(const std::vector<std::optional<TimeInterval>>& fact_intervals) {
  std::vector<PairLabel> out;
  const int n = static_cast<int>(fact_intervals.size());
  for (int i = 0; i < n; ++i) {
    if (!fact_intervals[i].has_value()) continue;
    for (int j = i + 1; j < n; ++j) {
      if (!fact_intervals[j].has_value()) continue;
      out.push_back({i, j, relation(*fact_intervals[i], *fact_intervals[j])});
    }
  }
  return out;
}

const std::vector<std::string>& month_names() {
  static const std::vector<std::string> names = {
      "January", "February", "March",     "April",   "May",      "June",
      "July",    "August",   "September", "October", "November", "December"};
  return names;
}

std::string point_surface(double grid_point) {
  const double year_floor = std::floor(grid_point + 1e-9);
  const int twelfths = static_cast<int>(std::lround((grid_point - year_floor) * 12.0));
  const int year = static_cast<int>(year_floor);
  if (twelfths == 0) return std::to_string(year);
  return month_names()[twelfths - 1] + " " + std::to_string(year);
}

}  // namespace chronograph::timex
