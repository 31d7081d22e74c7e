#include "chronograph/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace chronograph::metrics {

std::string normalize_answer(const std::string& text) {
  std::string lowered;
  lowered.reserve(text.size());
  for (char c : text) {
    const auto u = static_cast<unsigned char>(c);
    if (std::ispunct(u)) continue;
    lowered.push_back(static_cast<char>(std::tolower(u)));
  }
  std::istringstream in(lowered);
  std::string word, out;
  while (in >> word) {
    if (word == "a" || word == "an" || word == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

namespace {

std::vector<std::string> normalized_tokens(const std::string& text) {
  std::istringstream in(normalize_answer(text));
  std::vector<std::string> tokens;
  std::string word;
  while (in >> word) tokens.push_back(word);
  return tokens;
}

double token_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  std::map<std::string, int> counts;
  for (const auto& t : gold) ++counts[t];
  int common = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / pred.size();
  const double recall = static_cast<double>(common) / gold.size();
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

int em(const std::string& prediction, const std::vector<std::string>& gold_set) {
  const std::string p = normalize_answer(prediction);
  for (const auto& g : gold_set)
    if (p == normalize_answer(g)) return 1;
  return 0;
}

double f1(const std::string& prediction, const std::vector<std::string>& gold_set) {
  const auto pred = normalized_tokens(prediction);
  double best = 0.0;
  for (const auto& g : gold_set) best = std::max(best, token_f1(pred, normalized_tokens(g)));
  return best;
}

}  // namespace chronograph::metrics
