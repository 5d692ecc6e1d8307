#include <doctest.h>

#include <cmath>

#include "iplr/estimator.hpp"
#include "iplr/parallel.hpp"

using namespace iplr;

namespace {

RuleSpec small_rule(int s, int d, int m = 6) {
    std::vector<double> g(s, 1.0);
    return cbc_fast(2, m, s, d, 2, Weights::make_product(g)).rule;
}

}  // namespace

TEST_CASE("constant integrand") {
    RuleSpec rule = small_rule(2, 2);
    Integrand f = builtin_integrand(2, "constant");
    ScrambleConfig cfg;
    cfg.seed = 3;
    CHECK(integrate_once(f, rule, cfg) == 1.0);
    RqmcResult r = rqmc_estimate(f, rule, 10, 9);
    CHECK(r.mean == 1.0);
    CHECK(r.sample_variance == 0.0);
}

TEST_CASE("unscrambled mean of the first coordinate") {
    for (int m = 1; m <= 6; ++m) {
        RuleSpec rule = small_rule(1, 1, m);
        Integrand f;
        f.dim = 1;
        f.evaluate = [](const std::vector<double>& x) { return x[0]; };
        ScrambleConfig cfg;
        cfg.identity = true;
        cfg.depth = m;
        double N = std::ldexp(1.0, m);
        CHECK(integrate_once(f, rule, cfg) == doctest::Approx((N - 1) / (2 * N)).epsilon(1e-15));
    }
}

TEST_CASE("estimates are linear in the integrand") {
    RuleSpec rule = small_rule(2, 2);
    Integrand f = builtin_integrand(2, "product_quadratic");
    Integrand g = builtin_integrand(2, "oscillatory");
    Integrand h;
    h.dim = 2;
    h.evaluate = [&](const std::vector<double>& x) { return 2.0 * f.evaluate(x) - 3.0 * g.evaluate(x); };
    ScrambleConfig cfg;
    cfg.seed = 41;
    cfg.replication_id = 2;
    double lhs = integrate_once(h, rule, cfg);
    double rhs = 2.0 * integrate_once(f, rule, cfg) - 3.0 * integrate_once(g, rule, cfg);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("builtin integrands") {
    IntegrandOptions opt;
    opt.c = 0.5;
    auto f = builtin_integrand(3, "product_quadratic", opt);
    CHECK(*f.exact_integral == doctest::Approx(std::pow(1.0 / 3.0 + 0.5, 3)).epsilon(1e-15));
    CHECK(f.evaluate({1.0, 0.0, 0.5}) == doctest::Approx(1.5 * 0.5 * 0.75));
    CHECK(*builtin_integrand(2, "product_smooth").exact_integral == 1.0);
    // cos(2 pi u + x) over [0,1]: sin(2 pi u + 1) - sin(2 pi u)
    double u2pi = 2.0 * 3.14159265358979323846 * 0.25;
    CHECK(*builtin_integrand(1, "oscillatory").exact_integral ==
          doctest::Approx(std::sin(u2pi + 1.0) - std::sin(u2pi)).epsilon(1e-14));
    CHECK(builtin_integrand_kinds().size() == 4);
    CHECK_THROWS(builtin_integrand(2, "nope"));
    CHECK_THROWS(builtin_integrand(0, "constant"));
}

TEST_CASE("argument validation") {
    RuleSpec rule = small_rule(2, 1);
    CHECK_THROWS(rqmc_estimate(builtin_integrand(2, "constant"), rule, 1, 0));
    CHECK_THROWS(rqmc_estimate(builtin_integrand(3, "constant"), rule, 5, 0));
    CHECK_THROWS(integrate_once(builtin_integrand(1, "constant"), rule, ScrambleConfig{}));
}

TEST_CASE("rqmc estimates are reproducible and thread-count independent") {
    RuleSpec rule = small_rule(2, 2, 7);
    Integrand f = builtin_integrand(2, "product_smooth");
    set_thread_count(1);
    RqmcResult a = rqmc_estimate(f, rule, 16, 123);
    set_thread_count(8);
    RqmcResult b = rqmc_estimate(f, rule, 16, 123);
    set_thread_count(0);
    CHECK(a.estimates == b.estimates);
    CHECK(a.mean == b.mean);
    CHECK(a.sample_variance == b.sample_variance);
    RqmcResult c = rqmc_estimate(f, rule, 16, 124);
    CHECK(c.estimates != a.estimates);
    CHECK(std::abs(a.mean - 1.0) < 6 * a.stderr_() + 1e-12);
}
