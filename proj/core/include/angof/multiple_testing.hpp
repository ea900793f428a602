#pragma once

#include <vector>

namespace angof {

/// reject_j iff p_j <= alpha / m.
std::vector<bool> bonferroni(const std::vector<double>& pvalues, double alpha);

/// Step-up rule: reject every p <= p_(i*) with i* the largest i such that
/// p_(i) <= i alpha / m. `dependent` further divides alpha by
/// 1 + 1/2 + ... + 1/m.
std::vector<bool> benjamini_hochberg(const std::vector<double>& pvalues, double alpha, bool dependent = false);

}  // namespace angof
