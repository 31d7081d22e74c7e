#pragma once

#include <string>
#include <vector>

namespace chronograph::metrics {

// Lowercase, strip punctuation, drop articles (a/an/the), collapse whitespace.
std::string normalize_answer(const std::string& text);

// 1 iff the normalized prediction equals any normalized gold.
int em(const std::string& prediction, const std::vector<std::string>& gold_set);

// Max over golds of token-level F1 on normalized token multisets.
double f1(const std::string& prediction, const std::vector<std::string>& gold_set);

}  // namespace chronograph::metrics
