#include "chronograph/qeval.hpp"

#include <regex>
#include <sstream>

#include "chronograph/metrics.hpp"
#include "chronograph/rng.hpp"

namespace chronograph::qeval {

namespace {

bool contains_standalone_number(const std::string& text, const std::string& number) {
  std::size_t at = 0;
  while ((at = text.find(number, at)) != std::string::npos) {
    const bool left_ok = at == 0 || !std::isdigit(static_cast<unsigned char>(text[at - 1]));
    const std::size_t end = at + number.size();
    const bool right_ok =
        end >= text.size() || !std::isdigit(static_cast<unsigned char>(text[end]));
    if (left_ok && right_ok) return true;
    ++at;
  }
  return false;
}

// Date components of a time expression: "March 1970" or bare "1970".
std::vector<std::string> date_components(const std::string& surface) {
  static const std::regex re(
      "(?:(January|February|March|April|May|June|July|August|September|October|November|"
      "December|Jan|Feb|Mar|Apr|May|Jun|Jul|Aug|Sept|Sep|Oct|Nov|Dec)\\.?\\s+)?(\\d{3,4})",
      std::regex::ECMAScript | std::regex::icase);
  std::vector<std::string> out;
  auto begin = std::sregex_iterator(surface.begin(), surface.end(), re);
  for (auto it = begin; it != std::sregex_iterator(); ++it) out.push_back(it->str());
  return out;
}

}  // namespace

QuestionInfo classify_question(const corpus::Document& doc) {
  QuestionInfo info;
  const auto mentions = timex::extract_timex(doc.question);
  if (mentions.empty()) {
    info.category = "no-timex";
    return info;
  }
  info.mention = mentions[0];

  std::string text;
  for (const auto& p : doc.paragraphs) {
    text += p.text;
    text.push_back('\n');
  }
  bool all_present = true;
  for (const auto& component : date_components(info.mention->surface)) {
    const bool has_month =
        component.find_first_not_of("0123456789") != std::string::npos;
    const bool present = has_month ? text.find(component) != std::string::npos
                                   : contains_standalone_number(text, component);
    if (!present) {
      all_present = false;
      break;
    }
  }
  info.is_explicit = all_present;
  info.category = std::string(timex::to_string(info.mention->category)) +
                  (all_present ? "-explicit" : "-implicit");
  return info;
}

std::string realize_answer(const model::DocArtifacts& art, int predicted) {
  if (predicted < 0 || predicted >= art.n_facts) return corpus::kUnanswerable;
  const auto& node = art.graph.time_focused.nodes[art.fact_ids[predicted]];
  const std::string& sentence = art.chunks[node.chunk].sentences[node.sentence].text;

  const bool want_role = art.doc.question.rfind("What position", 0) == 0;
  const auto of_pos = sentence.find(" of ");
  if (of_pos == std::string::npos) return sentence;
  if (want_role) {
    const auto served = sentence.find(" served as ");
    const auto was = sentence.find(" was ");
    std::size_t begin;
    if (served != std::string::npos && served < of_pos)
      begin = served + 11;
    else if (was != std::string::npos && was < of_pos)
      begin = was + 5;
    else
      return sentence;
    return sentence.substr(begin, of_pos - begin);
  }
  const std::size_t begin = of_pos + 4;
  auto end = sentence.find(" from ", begin);
  if (end == std::string::npos) end = sentence.find_last_of('.');
  if (end == std::string::npos || end < begin) end = sentence.size();
  return sentence.substr(begin, end - begin);
}

std::string EvalReport::table() const {
  std::ostringstream os;
  os << "category            count     EM     F1\n";
  for (const auto& [name, stats] : per_category) {
    os.setf(std::ios::fixed);
    os.precision(2);
    os << name;
    for (std::size_t i = name.size(); i < 20; ++i) os << ' ';
    os.width(5);
    os << stats.count << "  ";
    os.width(5);
    os << stats.em() << "  ";
    os.width(5);
    os << stats.f1() << "\n";
  }
  os << "overall";
  for (std::size_t i = 7; i < 20; ++i) os << ' ';
  os.width(5);
  os << overall.count << "  ";
  os.width(5);
  os << overall.em() << "  ";
  os.width(5);
  os << overall.f1() << "\n";
  return os.str();
}

EvalReport evaluate(const std::vector<corpus::Document>& docs, const Predictor& predict) {
  EvalReport report;
  for (const auto& doc : docs) {
    const auto info = classify_question(doc);
    const std::string prediction = predict(doc);
    const int hit = metrics::em(prediction, doc.answers);
    const double f = metrics::f1(prediction, doc.answers);
    auto& stats = report.per_category[info.category];
    ++stats.count;
    stats.em_sum += hit;
    stats.f1_sum += f;
    ++report.overall.count;
    report.overall.em_sum += hit;
    report.overall.f1_sum += f;
  }
  return report;
}

Predictor model_predictor(num::ParamStore& params, const model::ModelConfig& config) {
  return [&params, config](const corpus::Document& doc) {
    const auto art = model::build_artifacts(doc, config);
    num::Tape tape;
    const auto out = model::run_inference(art, params, config, tape);
    return realize_answer(art, out.predicted);
  };
}

Predictor gold_echo_predictor() {
  return [](const corpus::Document& doc) { return doc.answers.at(0); };
}

Predictor question_hash_predictor(const model::ModelConfig& config) {
  model::ModelConfig light = config;
  light.graph_enabled = false;
  return [light](const corpus::Document& doc) {
    const auto art = model::build_artifacts(doc, light);
    if (art.n_facts == 0) return std::string(corpus::kUnanswerable);
    const int pick = static_cast<int>(fnv1a64(doc.question) % art.n_facts);
    return realize_answer(art, pick);
  };
}

}  // namespace chronograph::qeval
