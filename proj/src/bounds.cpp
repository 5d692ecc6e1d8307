#include "iplr/bounds.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace iplr {

double lambda_lower(int alpha, int d) { return 1.0 / (2.0 * std::min(alpha, d) + 1.0); }

std::vector<double> lambda_grid(int alpha, int d, int size, double rel_offset) {
    if (size < 1) throw std::invalid_argument("grid needs at least one point");
    double lo = lambda_lower(alpha, d);
    if (size == 1) return {1.0};
    // distances to the open endpoint shrink geometrically from 1 - lo to rel_offset * lo
    double span = 1.0 - lo;
    double last = rel_offset * lo;
    double ratio = std::pow(last / span, 1.0 / (size - 1));
    std::vector<double> g(size);
    for (int i = 0; i < size; ++i) g[i] = lo + span * std::pow(ratio, i);
    g[0] = 1.0;
    return g;
}

static void check_lambda(int alpha, int d, double lambda) {
    if (alpha < 1 || d < 1) throw std::invalid_argument("alpha and d must be >= 1");
    if (!(lambda > lambda_lower(alpha, d)) || !(lambda <= 1.0))
        throw std::invalid_argument("lambda outside (1/(2min(alpha,d)+1), 1]");
}

double c_tilde(int alpha, int d, double lambda, int b) {
    check_lambda(alpha, d, lambda);
    int a = std::min(alpha, d);
    double first = std::pow((b - 1.0) / (1.0 - std::pow(b, -2.0 * a)), lambda);
    double denom = 1.0 - std::pow(b, 1.0 - (2.0 * a + 1.0) * lambda);
    if (!(denom > 0.0)) throw std::domain_error("lambda too close to the lower limit");
    double second = (b - 1.0) / denom;
    double v = std::max(first, second);
    if (!std::isfinite(v)) throw std::domain_error("lambda too close to the lower limit");
    return v;
}

double c_const(int alpha, int d, double lambda, int a, int b) {
    if (a < 0 || a > d) throw std::invalid_argument("a must lie in [0, d]");
    double ct = c_tilde(alpha, d, lambda, b);
    int e = d > alpha ? d - alpha : 0;
    return std::pow(4.0, lambda * e) * (std::pow(1.0 + ct, a) - 1.0);
}

double theorem_bound(int tau, int m, int alpha, int d, double lambda, const Weights& w, int b) {
    if (tau < 1) throw std::invalid_argument("tau must be >= 1");
    int j0 = (tau + d - 1) / d;
    int d0 = tau - (j0 - 1) * d;
    if (j0 > w.s) throw std::invalid_argument("tau exceeds d*s");
    double Cd = c_const(alpha, d, lambda, d, b);
    double Cd0 = c_const(alpha, d, lambda, d0, b);
    double inner = 0.0;
    if (w.is_product()) {
        double prod = 1.0;
        for (int j = 0; j < j0 - 1; ++j) prod *= 1.0 + std::pow(w.product[j], lambda) * Cd;
        inner = (prod - 1.0) + Cd0 * std::pow(w.product[j0 - 1], lambda) * prod;
    } else {
        Subset full = (Subset{1} << (j0 - 1)) - 1;
        Subset top = Subset{1} << (j0 - 1);
        // enumerate every subset of {1..j0-1}, including the empty one
        for (Subset u = 0;; u = (u - full) & full) {
            double cu = std::pow(Cd, std::popcount(u));
            if (u != 0) inner += std::pow(w.gamma(u), lambda) * cu;
            inner += Cd0 * std::pow(w.gamma(u | top), lambda) * cu;
            if (u == full) break;
        }
    }
    double N1 = std::pow(static_cast<double>(b), m) - 1.0;
    return std::pow(N1, -1.0 / lambda) * std::pow(inner, 1.0 / lambda);
}

BestBound best_bound_over_lambda(int tau, int m, int alpha, int d, const Weights& w, int b,
                                 const std::vector<double>& grid) {
    if (grid.empty()) throw std::invalid_argument("empty lambda grid");
    BestBound best{grid[0], std::numeric_limits<double>::infinity()};
    for (double lam : grid) {
        double v = theorem_bound(tau, m, alpha, d, lam, w, b);
        if (v < best.bound) best = {lam, v};
    }
    return best;
}

Weights propagated_weights(const Weights& w, int alpha, int alpha_prime, int d) {
    if (alpha_prime < alpha || alpha_prime > d) throw std::invalid_argument("need alpha <= alpha' <= d");
    double e = (1.0 + 2.0 * alpha_prime) / (1.0 + 2.0 * alpha);
    auto transform = [&](double g, int size) {
        return std::pow(std::pow(4.0, size * (d - alpha)) * g, e) / std::pow(4.0, size * (d - alpha_prime));
    };
    if (w.is_product()) {
        std::vector<double> g(w.product.size());
        for (std::size_t j = 0; j < g.size(); ++j) g[j] = transform(w.product[j], 1);
        return Weights::make_product(std::move(g));
    }
    std::map<Subset, double> g;
    for (const auto& [u, v] : w.general) g[u] = transform(v, std::popcount(u));
    return Weights::make_general(w.s, std::move(g));
}

PropagationResult propagation_check(const RuleSpec& rule, int alpha_prime, double tol) {
    Weights wp = propagated_weights(rule.weights, rule.alpha, alpha_prime, rule.d);
    ModulusContext ctx = rule.context();
    double B = criterion_partial(rule.q, ctx, rule.params(), rule.weights);
    double Bp = criterion_partial(rule.q, ctx, SmoothnessParams{alpha_prime, rule.d}, wp);
    double e = (1.0 + 2.0 * alpha_prime) / (1.0 + 2.0 * rule.alpha);
    PropagationResult r;
    r.lhs = Bp;
    r.rhs = std::pow(std::max(B, 0.0), e);
    r.holds = r.lhs <= r.rhs + tol;
    return r;
}

}  // namespace iplr
