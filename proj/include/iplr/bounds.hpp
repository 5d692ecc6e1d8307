#pragma once

#include <vector>

#include "iplr/cbc.hpp"
#include "iplr/criterion.hpp"

namespace iplr {

// Smallest admissible lambda is strictly above 1/(2 min(alpha,d) + 1).
double lambda_lower(int alpha, int d);
std::vector<double> lambda_grid(int alpha, int d, int size = 33, double rel_offset = 1e-6);

double c_tilde(int alpha, int d, double lambda, int b);
double c_const(int alpha, int d, double lambda, int a, int b);

// Right-hand side of the CBC error bound for the first tau components.
double theorem_bound(int tau, int m, int alpha, int d, double lambda, const Weights& w, int b);

struct BestBound {
    double lambda = 1.0;
    double bound = 0.0;
};
BestBound best_bound_over_lambda(int tau, int m, int alpha, int d, const Weights& w, int b,
                                 const std::vector<double>& grid);

struct PropagationResult {
    double lhs = 0.0;  // B_{alpha',d,gamma'}
    double rhs = 0.0;  // B_{alpha,d,gamma}^{(1+2alpha')/(1+2alpha)}
    bool holds = false;
};
Weights propagated_weights(const Weights& w, int alpha, int alpha_prime, int d);
PropagationResult propagation_check(const RuleSpec& rule, int alpha_prime, double tol = 1e-10);

}  // namespace iplr
