#pragma once

#include <vector>

namespace backscatter {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

const GaussRule& gauss_legendre(int order);

// Appends the rule mapped to [a, b] to the node/weight arrays.
void append_panel(const GaussRule& rule, double a, double b, std::vector<double>& nodes,
                  std::vector<double>& weights);

}  // namespace backscatter
