#include "chronograph/perturb.hpp"

#include <cmath>

#include "chronograph/errors.hpp"
#include "chronograph/metrics.hpp"

namespace chronograph::perturb {

namespace {

long to_grid(double years) { return std::lround(years * 12.0); }

double from_grid(long twelfths) {
  // Reconstruct as year + m/12 so equality with normalize() output is exact.
  long year = twelfths / 12;
  long m = twelfths - year * 12;
  if (m < 0) {
    m += 12;
    --year;
  }
  return static_cast<double>(year) + static_cast<double>(m) / 12.0;
}

// Wording for the sub-interval. A one-year span from an integer start is an
// "in YEAR"; a one-month span is an "in MONTH YEAR"; everything else becomes
// a "between" range.
std::string render(long s, long e) {
  const bool start_integer = s % 12 == 0;
  if (e - s == 12 && start_integer) return "in " + std::to_string(s / 12);
  if (e - s == 1) {
    const long year = start_integer ? s / 12 - 1 : s / 12;
    const long month = start_integer ? 12 : s % 12;
    return "in " + timex::month_names()[month - 1] + " " + std::to_string(year);
  }
  return "between " + timex::point_surface(from_grid(s)) + " and " +
         timex::point_surface(from_grid(e));
}

}  // namespace

std::optional<QuestionConstraint> extract_constraint(const std::string& question) {
  const auto mentions = timex::extract_timex(question);
  if (mentions.empty()) return std::nullopt;
  QuestionConstraint c;
  c.category = mentions[0].category;
  c.interval = mentions[0].interval;
  c.begin = mentions[0].begin;
  c.end = mentions[0].end;
  c.surface = mentions[0].surface;
  return c;
}

bool perturbable(const QuestionConstraint& constraint) {
  if (!constraint.interval.finite()) return false;
  const long s = to_grid(constraint.interval.start);
  const long e = to_grid(constraint.interval.end);
  return e - s >= 2;  // at least three grid points
}

QuestionConstraint perturb_with(const QuestionConstraint& constraint, Rng& rng) {
  if (!constraint.interval.finite())
    throw ValidationError("interval not perturbable: unbounded");
  const long s = to_grid(constraint.interval.start);
  const long e = to_grid(constraint.interval.end);
  const long m = e - s + 1;  // grid points
  const long total_pairs = m * (m - 1) / 2;
  if (total_pairs - 1 <= 0) throw ValidationError("interval not perturbable");

  long k = static_cast<long>(rng.below(static_cast<std::uint64_t>(total_pairs - 1)));
  // Pairs (i, j), i < j, ordered lexicographically; the identity pair
  // (0, m-1) sits at index m-2 and is skipped.
  if (k >= m - 2) ++k;
  long i = 0, row = m - 1;
  while (k >= row) {
    k -= row;
    ++i;
    row = m - 1 - i;
  }
  const long j = i + 1 + k;

  const long ns = s + i, ne = s + j;
  QuestionConstraint out;
  out.surface = render(ns, ne);
  out.interval = {from_grid(ns), from_grid(ne)};
  out.category = out.surface.rfind("in ", 0) == 0 ? timex::TimeXCategory::In
                                                  : timex::TimeXCategory::Between;
  out.begin = constraint.begin;
  out.end = constraint.begin + static_cast<int>(out.surface.size());
  return out;
}

QuestionConstraint perturb(const QuestionConstraint& constraint, std::uint64_t rng_seed) {
  Rng rng(rng_seed);
  return perturb_with(constraint, rng);
}

std::string apply_to_question(const std::string& question, const QuestionConstraint& original,
                              const QuestionConstraint& perturbed) {
  std::string out = question;
  out.replace(static_cast<std::size_t>(original.begin),
              static_cast<std::size_t>(original.end - original.begin), perturbed.surface);
  return out;
}

ConsistencyReport consistency(const qeval::Predictor& eval_fn,
                              const std::vector<corpus::Document>& questions,
                              std::uint64_t rng_seed) {
  if (questions.empty()) throw ValidationError("consistency over an empty question list");
  Rng rng(rng_seed);
  ConsistencyReport report;
  for (const auto& doc : questions) {
    const auto constraint = extract_constraint(doc.question);
    if (!constraint.has_value() || !perturbable(*constraint)) continue;
    const auto perturbed = perturb_with(*constraint, rng);
    corpus::Document shifted = doc;
    shifted.question = apply_to_question(doc.question, *constraint, perturbed);
    const std::string prediction = eval_fn(shifted);
    if (metrics::em(prediction, doc.answers) == 1)
      ++report.n_consistent;
    else
      ++report.n_inconsistent;
  }
  if (report.n_consistent + report.n_inconsistent == 0)
    throw ValidationError("no perturbable questions");
  return report;
}

std::vector<corpus::Document> select_consistency_pool(
    const std::vector<corpus::Document>& docs, const qeval::Predictor& eval_fn,
    std::uint64_t rng_seed, int max_n, bool implicit_only) {
  std::vector<corpus::Document> pool;
  for (const auto& doc : docs) {
    const auto constraint = extract_constraint(doc.question);
    if (!constraint.has_value() || !perturbable(*constraint)) continue;
    if (implicit_only && qeval::classify_question(doc).is_explicit) continue;
    if (metrics::em(eval_fn(doc), doc.answers) != 1) continue;
    pool.push_back(doc);
  }
  Rng rng(mix64(rng_seed, 0x5e1ec7ull));
  rng.shuffle(pool);
  if (static_cast<int>(pool.size()) > max_n) pool.resize(max_n);
  return pool;
}

}  // namespace chronograph::perturb
