#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

#include "chronograph/corpus.hpp"
#include "chronograph/errors.hpp"
#include "chronograph/rng.hpp"
#include "chronograph/timex.hpp"

namespace chronograph::corpus {

namespace {

using timex::TimeInterval;
using timex::TimeXCategory;

const std::vector<std::string>& first_names() {
  static const std::vector<std::string> v = {
      "Elena",  "Marcus", "Ingrid",  "Tobias", "Aurelia", "Felix",  "Margit",
      "Oswald", "Petra",  "Quentin", "Rosa",   "Stellan", "Theresa", "Viktor",
      "Wilma",  "Casper", "Dorothea", "Edmund", "Franziska", "Gregor"};
  return v;
}

const std::vector<std::string>& last_names() {
  static const std::vector<std::string> v = {
      "Mercer",   "Hartwell", "Lindqvist", "Obermann", "Castellan", "Durand",
      "Eckhart",  "Fairburn", "Galloway",  "Hollis",   "Iverson",   "Jarvis",
      "Kessler",  "Lombard",  "Marchetti", "Norwood",  "Oakes",     "Pemberton",
      "Quimby",   "Rosenthal"};
  return v;
}

const std::vector<std::string>& roles() {
  static const std::vector<std::string> v = {
      "president", "director",  "chancellor", "dean",      "curator",
      "treasurer", "provost",   "editor",     "chairman",  "secretary",
      "manager",   "trustee",   "registrar",  "librarian", "bursar",
      "warden",    "archivist", "steward",    "rector",    "superintendent"};
  return v;
}

const std::vector<std::string>& organizations() {
  static const std::vector<std::string> v = {
      "Northfield University", "Halloway Institute",  "Meridian College",
      "Atlas Foundation",      "Beacon Society",      "Crestwood Academy",
      "Ellsworth Museum",      "Fairview Seminary",   "Granite Polytechnic",
      "Harborview Library",    "Ironwood Conservatory", "Juniper Observatory",
      "Kingsmead School",      "Lakeshore Gallery",   "Maplewood Trust",
      "Newbridge Laboratory",  "Oakhurst College",    "Pinecrest Archive",
      "Quarry Hill Press",     "Riverton Orchestra",  "Summerfield Clinic",
      "Thornbury Hospital",    "Underhill Workshop",  "Vantage Bureau"};
  return v;
}

const std::vector<std::string>& towns() {
  static const std::vector<std::string> v = {
      "Westbrook", "Eastvale", "Northgate", "Southmoor", "Ashford", "Brindle",
      "Colford",   "Danbury",  "Elmsworth", "Foxglove",  "Gresham", "Hazelmere"};
  return v;
}

const std::vector<std::string>& headings_pool() {
  static const std::vector<std::string> v = {
      "Early life", "Education",     "Career",  "Later career",
      "Public service", "Personal life", "Retirement", "Legacy"};
  return v;
}

struct Fact {
  int chunk = 0;
  std::string role;
  std::string org;
  int start = 0;
  int end = 0;
  TimeInterval interval() const { return {double(start), double(end)}; }
};

struct Constraint {
  TimeXCategory category = TimeXCategory::In;
  TimeInterval interval;
  std::string phrase;  // e.g. "between 1970 and 1975"
};

int satisfied_count(const std::vector<Fact>& facts, const Constraint& c) {
  int n = 0;
  for (const auto& f : facts)
    if (timex::satisfies(c.category, c.interval, f.interval())) ++n;
  return n;
}

int satisfied_index(const std::vector<Fact>& facts, const Constraint& c) {
  for (std::size_t i = 0; i < facts.size(); ++i)
    if (timex::satisfies(c.category, c.interval, facts[i].interval())) return static_cast<int>(i);
  return -1;
}

std::string month_of(Rng& rng) { return timex::month_names()[rng.below(11)]; }

TimeInterval month_in(const std::string& month, int year) {
  timex::Date d{year, 0};
  for (int m = 0; m < 12; ++m)
    if (timex::month_names()[m] == month) d.month = m + 1;
  return timex::normalize(TimeXCategory::In, d);
}

double month_point(const std::string& month, int year) {
  timex::Date d{year, 0};
  for (int m = 0; m < 12; ++m)
    if (timex::month_names()[m] == month) d.month = m + 1;
  return timex::date_point(d);
}

// Builders return nullopt when the sampled shape does not admit the category;
// the caller retries or falls back.

std::optional<Constraint> build_answerable(Rng& rng, QuestionCategory cat,
                                           const std::vector<Fact>& facts,
                                           const std::set<int>& doc_years,
                                           double interior_year_rate) {
  const int g = static_cast<int>(rng.below(facts.size()));
  const Fact& f = facts[g];
  Constraint c;
  switch (cat) {
    case QuestionCategory::InExplicit: {
      c.category = TimeXCategory::In;
      c.interval = timex::normalize(c.category, {f.start, 0});
      c.phrase = "in " + std::to_string(f.start);
      break;
    }
    case QuestionCategory::BetweenExplicit: {
      c.category = TimeXCategory::Between;
      c.interval = timex::normalize(c.category, {f.start, 0}, timex::Date{f.end, 0});
      c.phrase = "between " + std::to_string(f.start) + " and " + std::to_string(f.end);
      break;
    }
    case QuestionCategory::InImplicit: {
      c.category = TimeXCategory::In;
      if (rng.chance(interior_year_rate) && f.end - f.start >= 2) {
        const int y = f.start + 1 + static_cast<int>(rng.below(f.end - f.start - 1));
        if (doc_years.count(y)) return std::nullopt;
        c.interval = timex::normalize(c.category, {y, 0});
        c.phrase = "in " + std::to_string(y);
      } else {
        const std::string m = month_of(rng);
        c.interval = month_in(m, f.start);
        c.phrase = "in " + m + " " + std::to_string(f.start);
      }
      break;
    }
    case QuestionCategory::BetweenImplicit: {
      c.category = TimeXCategory::Between;
      const double which = rng.uniform();
      if (which < interior_year_rate && f.end - f.start >= 3) {
        const int span = f.end - f.start;
        const int y1 = f.start + 1 + static_cast<int>(rng.below(span - 2));
        const int y2 = y1 + 1 + static_cast<int>(rng.below(f.end - y1 - 1));
        if (doc_years.count(y1) || doc_years.count(y2)) return std::nullopt;
        c.interval = timex::normalize(c.category, {y1, 0}, timex::Date{y2, 0});
        c.phrase = "between " + std::to_string(y1) + " and " + std::to_string(y2);
      } else if (which < 0.5 + interior_year_rate / 2) {
        const std::string m = month_of(rng);
        c.interval = {month_point(m, f.start), double(f.end)};
        c.phrase = "between " + m + " " + std::to_string(f.start) + " and " + std::to_string(f.end);
      } else {
        const std::string m1 = month_of(rng);
        const std::string m2 = month_of(rng);
        const double p1 = month_point(m1, f.start);
        const double p2 = month_point(m2, f.end - 1);
        if (p1 > p2) return std::nullopt;
        c.interval = {p1, p2};
        c.phrase = "between " + m1 + " " + std::to_string(f.start) + " and " + m2 + " " +
                   std::to_string(f.end - 1);
      }
      break;
    }
    case QuestionCategory::BeforeImplicit: {
      c.category = TimeXCategory::Before;
      int e0 = facts[0].end;
      for (const auto& x : facts) e0 = std::min(e0, x.end);
      int ties = 0;
      for (const auto& x : facts) ties += (x.end == e0);
      if (ties != 1) return std::nullopt;
      // A bare year strictly inside the gap to the next-smallest end when one
      // exists without colliding with document years, else a month anchor.
      int e1 = 1 << 30;
      for (const auto& x : facts)
        if (x.end > e0) e1 = std::min(e1, x.end);
      std::vector<int> gap;
      for (int y = e0 + 1; y < e1; ++y)
        if (!doc_years.count(y)) gap.push_back(y);
      if (!gap.empty() && rng.chance(interior_year_rate)) {
        const int y = gap[rng.below(gap.size())];
        c.interval = timex::normalize(c.category, {y, 0});
        c.phrase = "before " + std::to_string(y);
      } else {
        const std::string m = month_of(rng);
        c.interval = {timex::neg_inf(), month_point(m, e0)};
        c.phrase = "before " + m + " " + std::to_string(e0);
      }
      break;
    }
    case QuestionCategory::AfterImplicit: {
      c.category = TimeXCategory::After;
      int s0 = facts[0].start;
      for (const auto& x : facts) s0 = std::max(s0, x.start);
      int ties = 0;
      for (const auto& x : facts) ties += (x.start == s0);
      if (ties != 1) return std::nullopt;
      int s1 = -(1 << 30);
      for (const auto& x : facts)
        if (x.start < s0) s1 = std::max(s1, x.start);
      std::vector<int> gap;
      for (int y = s1 + 1; y <= s0; ++y)
        if (!doc_years.count(y)) gap.push_back(y);
      if (!gap.empty() && rng.chance(interior_year_rate)) {
        const int y = gap[rng.below(gap.size())];
        c.interval = timex::normalize(c.category, {y, 0});
        c.phrase = "after " + std::to_string(y);
      } else {
        const std::string m = month_of(rng);
        c.interval = {month_point(m, s1), timex::pos_inf()};
        c.phrase = "after " + m + " " + std::to_string(s1);
      }
      break;
    }
  }
  if (satisfied_count(facts, c) != 1) return std::nullopt;
  return c;
}

std::optional<Constraint> build_unanswerable(Rng& rng, QuestionCategory cat,
                                             const std::vector<Fact>& facts,
                                             const std::set<int>& doc_years) {
  Constraint c;
  switch (cat) {
    case QuestionCategory::InExplicit: {
      c.category = TimeXCategory::In;
      const Fact& f = facts[rng.below(facts.size())];
      c.interval = timex::normalize(c.category, {f.end, 0});
      c.phrase = "in " + std::to_string(f.end);
      break;
    }
    case QuestionCategory::BetweenExplicit: {
      c.category = TimeXCategory::Between;
      const Fact& a = facts[rng.below(facts.size())];
      const Fact& b = facts[rng.below(facts.size())];
      const int x = std::min(a.start, b.start);
      const int y = std::max(a.end, b.end);
      if (x >= y) return std::nullopt;
      c.interval = timex::normalize(c.category, {x, 0}, timex::Date{y, 0});
      c.phrase = "between " + std::to_string(x) + " and " + std::to_string(y);
      break;
    }
    case QuestionCategory::InImplicit: {
      c.category = TimeXCategory::In;
      const Fact& f = facts[rng.below(facts.size())];
      const std::string m = month_of(rng);
      c.interval = month_in(m, f.end);
      c.phrase = "in " + m + " " + std::to_string(f.end);
      break;
    }
    case QuestionCategory::BetweenImplicit: {
      c.category = TimeXCategory::Between;
      const Fact& a = facts[rng.below(facts.size())];
      const Fact& b = facts[rng.below(facts.size())];
      const std::string m = month_of(rng);
      const int x = std::min(a.start, b.start);
      const int y = std::max(a.end, b.end);
      const double p = month_point(m, x);
      if (p > y) return std::nullopt;
      c.interval = {p, double(y)};
      c.phrase = "between " + m + " " + std::to_string(x) + " and " + std::to_string(y);
      break;
    }
    case QuestionCategory::BeforeImplicit: {
      c.category = TimeXCategory::Before;
      int lo = facts[0].start;
      for (const auto& x : facts) lo = std::min(lo, std::min(x.start, x.end));
      const int y = lo - 2 - static_cast<int>(rng.below(5));
      if (doc_years.count(y)) return std::nullopt;
      c.interval = timex::normalize(c.category, {y, 0});
      c.phrase = "before " + std::to_string(y);
      break;
    }
    case QuestionCategory::AfterImplicit: {
      c.category = TimeXCategory::After;
      int hi = facts[0].end;
      for (const auto& x : facts) hi = std::max(hi, std::max(x.start, x.end));
      const int y = hi + 2 + static_cast<int>(rng.below(5));
      if (doc_years.count(y)) return std::nullopt;
      c.interval = timex::normalize(c.category, {y, 0});
      c.phrase = "after " + std::to_string(y);
      break;
    }
  }
  if (satisfied_count(facts, c) != 0) return std::nullopt;
  return c;
}

Document make_document(std::uint64_t seed, int index, const SynthConfig& cfg) {
  Rng rng(mix64(seed, static_cast<std::uint64_t>(index) + 0x51ull));

  const std::string name =
      rng.pick(first_names()) + " " + rng.pick(last_names());

  std::vector<std::string> role_pool = roles();
  std::vector<std::string> org_pool = organizations();
  rng.shuffle(role_pool);
  rng.shuffle(org_pool);

  std::vector<std::string> heads = headings_pool();
  rng.shuffle(heads);

  // Timeline. Flashback chunks jump back to an earlier era, so document
  // order is not chronological order and cross-chunk intervals may overlap.
  for (int attempt = 0; attempt < 8; ++attempt) {
    const bool allow_flashback = attempt < 4;
    const int n_chunks =
        static_cast<int>(rng.range(cfg.min_chunks, cfg.max_chunks));
    std::vector<Fact> facts;
    std::vector<int> facts_in_chunk(n_chunks, 0);
    int cursor = 1902 + static_cast<int>(rng.below(12));
    int next_entity = 0;
    for (int c = 0; c < n_chunks; ++c) {
      int era = cursor;
      if (allow_flashback && c > 0 && rng.chance(cfg.flashback_rate))
        era = std::max(1900, cursor - static_cast<int>(rng.range(8, 30)));
      const int n_facts =
          static_cast<int>(rng.range(cfg.min_facts_per_chunk, cfg.max_facts_per_chunk));
      for (int k = 0; k < n_facts; ++k) {
        if (era > 2012) era = std::max(1900, era - 75);
        Fact f;
        f.chunk = c;
        f.role = role_pool[next_entity % role_pool.size()];
        f.org = org_pool[next_entity % org_pool.size()];
        ++next_entity;
        f.start = era;
        f.end = era + static_cast<int>(rng.range(3, 5));
        era = f.end + (rng.chance(0.35) ? 0 : static_cast<int>(rng.range(1, 2)));
        facts.push_back(f);
        ++facts_in_chunk[c];
      }
      cursor = std::max(cursor, era + static_cast<int>(rng.range(1, 2)));
    }

    std::set<int> doc_years;
    for (const auto& f : facts) {
      doc_years.insert(f.start);
      doc_years.insert(f.end);
    }

    // Question.
    if (cfg.categories.empty()) throw ValidationError("no question categories enabled");
    const bool want_unanswerable = rng.chance(cfg.unanswerable_rate);
    std::optional<Constraint> constraint;
    QuestionCategory picked = cfg.categories[rng.below(cfg.categories.size())];
    for (int tries = 0; tries < 40 && !constraint; ++tries) {
      const QuestionCategory cat =
          tries == 0 ? picked : cfg.categories[rng.below(cfg.categories.size())];
      constraint = want_unanswerable
                       ? build_unanswerable(rng, cat, facts, doc_years)
                       : build_answerable(rng, cat, facts, doc_years, cfg.interior_year_rate);
    }
    if (!constraint && want_unanswerable) {
      for (int tries = 0; tries < 40 && !constraint; ++tries) {
        const QuestionCategory cat = cfg.categories[rng.below(cfg.categories.size())];
        constraint = build_answerable(rng, cat, facts, doc_years, cfg.interior_year_rate);
      }
    }
    if (!constraint) continue;  // resample the timeline

    const int gold = satisfied_index(facts, *constraint);

    Document doc;
    doc.id = "synth-" + std::to_string(index);
    doc.title = name;

    int fi = 0;
    for (int c = 0; c < n_chunks; ++c) {
      std::ostringstream text;
      if (c == 0 && rng.chance(0.6))
        text << name << " was born in the town of " << rng.pick(towns()) << ". ";
      for (int k = 0; k < facts_in_chunk[c]; ++k, ++fi) {
        const Fact& f = facts[fi];
        if (k > 0) text << " ";
        if (rng.chance(0.5))
          text << name << " was " << f.role << " of " << f.org << " from " << f.start
               << " to " << f.end << ".";
        else
          text << name << " served as " << f.role << " of " << f.org << " from "
               << f.start << " to " << f.end << ".";
      }
      doc.paragraphs.push_back({heads[c % heads.size()], text.str()});
    }

    // Time is the only disambiguator: every fact shares the work/position
    // relation, so the question must not leak the gold role or organization.
    if (rng.chance(0.5)) {
      doc.question = "What position did " + name + " hold " + constraint->phrase + "?";
      doc.answers = {gold >= 0 ? facts[gold].role : std::string(kUnanswerable)};
    } else {
      doc.question = "Which organization did " + name + " work for " + constraint->phrase + "?";
      doc.answers = {gold >= 0 ? facts[gold].org : std::string(kUnanswerable)};
    }
    return doc;
  }
  throw NumericalError("synthetic generator failed to produce a document");
}

}  // namespace

std::vector<Document> gen_synthetic(std::uint64_t seed, int n_docs, const SynthConfig& config) {
  if (n_docs < 1) throw ValidationError("n_docs must be >= 1");
  if (config.categories.empty()) throw ValidationError("no question categories enabled");
  std::vector<Document> docs;
  docs.reserve(n_docs);
  for (int i = 0; i < n_docs; ++i) docs.push_back(make_document(seed, i, config));
  return docs;
}

}  // namespace chronograph::corpus
