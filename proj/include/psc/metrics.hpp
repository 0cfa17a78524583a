#pragma once

#include <utility>
#include <vector>

namespace psc {

/// Permutation-matched clustering accuracy: the largest fraction of
/// agreements over all injective matchings of predicted to true clusters,
/// found by optimal assignment on the contingency table.
double accuracy(const std::vector<int>& true_labels, const std::vector<int>& pred_labels);

/// Pair-counting Adjusted Rand Index.
double ari(const std::vector<int>& true_labels, const std::vector<int>& pred_labels);

/// Sample mean and sample standard deviation (n-1 denominator) of run scores.
std::pair<double, double> monte_carlo(const std::vector<double>& scores);

/// Maximum-total-weight assignment over a rectangular score matrix
/// (rows x cols, nonnegative); returns the chosen column per row (-1 for
/// rows left unmatched when cols < rows). Exposed for tests.
std::vector<int> max_assignment(const std::vector<std::vector<double>>& scores);

}  // namespace psc
