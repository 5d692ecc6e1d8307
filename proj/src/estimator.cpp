#include "iplr/estimator.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "iplr/ddouble.hpp"
#include "iplr/parallel.hpp"

namespace iplr {

std::vector<std::string> builtin_integrand_kinds() {
    return {"constant", "product_quadratic", "product_smooth", "oscillatory"};
}

Integrand builtin_integrand(int s, const std::string& kind, const IntegrandOptions& opt) {
    if (s < 1) throw std::invalid_argument("integrand dimension must be >= 1");
    Integrand f;
    f.dim = s;
    if (kind == "constant") {
        f.evaluate = [](const std::vector<double>&) { return 1.0; };
        f.exact_integral = 1.0;
        f.description = "f(x) = 1";
    } else if (kind == "product_quadratic") {
        double c = opt.c;
        f.evaluate = [c](const std::vector<double>& x) {
            double v = 1.0;
            for (double xj : x) v *= xj * xj + c;
            return v;
        };
        f.exact_integral = std::pow(1.0 / 3.0 + c, s);
        f.description = "prod_j (x_j^2 + c)";
    } else if (kind == "product_smooth") {
        int k = opt.power;
        if (k < 1) throw std::invalid_argument("product_smooth power must be >= 1");
        std::vector<double> g = opt.gamma.empty() ? std::vector<double>(s, 1.0) : opt.gamma;
        if (static_cast<int>(g.size()) != s) throw std::invalid_argument("product_smooth needs s weights");
        double mean = 1.0 / (k + 1);
        f.evaluate = [g, k, mean](const std::vector<double>& x) {
            double v = 1.0;
            for (std::size_t j = 0; j < x.size(); ++j) v *= 1.0 + g[j] * (std::pow(x[j], k) - mean);
            return v;
        };
        f.exact_integral = 1.0;
        f.description = "prod_j (1 + gamma_j (x_j^k - 1/(k+1)))";
    } else if (kind == "oscillatory") {
        std::vector<double> a = opt.frequency.empty() ? std::vector<double>(s, 1.0) : opt.frequency;
        if (static_cast<int>(a.size()) != s) throw std::invalid_argument("oscillatory needs s coefficients");
        double shift = 2.0 * std::numbers::pi * opt.phase;
        f.evaluate = [a, shift](const std::vector<double>& x) {
            double t = shift;
            for (std::size_t j = 0; j < x.size(); ++j) t += a[j] * x[j];
            return std::cos(t);
        };
        std::complex<double> z = std::polar(1.0, shift);
        for (double aj : a) {
            if (aj == 0.0) continue;
            z *= (std::polar(1.0, aj) - 1.0) / std::complex<double>(0.0, aj);
        }
        f.exact_integral = z.real();
        f.description = "cos(2 pi u + sum_j a_j x_j)";
    } else {
        throw std::invalid_argument("unknown integrand kind: " + kind);
    }
    return f;
}

double RqmcResult::stderr_() const {
    return replications > 0 ? std::sqrt(sample_variance / replications) : 0.0;
}

DigitMatrix rule_points(const RuleSpec& rule, int depth) {
    ModulusContext ctx = rule.context();
    return generate_point_set(rule.q, ctx, depth > 0 ? depth : default_depth(rule.b, rule.m));
}

double average_over(const Integrand& f, const DigitMatrix& pts) {
    if (pts.dim != f.dim) throw std::invalid_argument("integrand dimension differs from point dimension");
    DD acc;
    std::vector<double> x(pts.dim);
    for (std::size_t n = 0; n < pts.n_points; ++n) {
        for (int j = 0; j < pts.dim; ++j) x[j] = pts.value(n, j);
        acc += DD(f.evaluate(x));
    }
    return (acc / DD(static_cast<double>(pts.n_points))).to_double();
}

double integrate_once(const Integrand& f, const DigitMatrix& lattice, int d, const ScrambleConfig& cfg) {
    return average_over(f, order_d_scramble(lattice, d, cfg));
}

double integrate_once(const Integrand& f, const RuleSpec& rule, const ScrambleConfig& cfg) {
    if (f.dim != rule.s) throw std::invalid_argument("integrand dimension differs from rule dimension s");
    return integrate_once(f, rule_points(rule, cfg.depth), rule.d, cfg);
}

RqmcResult rqmc_estimate(const Integrand& f, const RuleSpec& rule, int R, std::uint64_t seed, int depth) {
    if (R < 2) throw std::invalid_argument("need at least two replications");
    if (f.dim != rule.s) throw std::invalid_argument("integrand dimension differs from rule dimension s");
    DigitMatrix lattice = rule_points(rule, depth);
    RqmcResult res;
    res.replications = R;
    res.seed = seed;
    res.estimates.assign(R, 0.0);
    parallel_chunks(static_cast<std::size_t>(R), 1, [&](std::size_t lo, std::size_t hi, std::size_t) {
        for (std::size_t r = lo; r < hi; ++r) {
            ScrambleConfig cfg;
            cfg.seed = seed;
            cfg.depth = lattice.depth;
            cfg.replication_id = r;
            res.estimates[r] = integrate_once(f, lattice, rule.d, cfg);
        }
    });
    DD sum;
    for (double e : res.estimates) sum += DD(e);
    DD mean = sum / DD(static_cast<double>(R));
    DD ss;
    for (double e : res.estimates) {
        DD dv = DD(e) - mean;
        ss += dv * dv;
    }
    res.mean = mean.to_double();
    res.sample_variance = (ss / DD(static_cast<double>(R - 1))).to_double();
    return res;
}

}  // namespace iplr
