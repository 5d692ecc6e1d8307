#include <doctest.h>

#include <cmath>
#include <random>

#include "iplr/criterion.hpp"
#include "iplr/interlace.hpp"
#include "oracles.hpp"

using namespace iplr;

namespace {

GeneratingVector random_q(std::mt19937_64& rng, const ModulusContext& ctx, int len) {
    GeneratingVector q{Poly({1})};
    while (static_cast<int>(q.size()) < len) q.push_back(unpack(1 + rng() % ctx.order, ctx.b()));
    return q;
}

std::vector<double> random_gamma(std::mt19937_64& rng, int s) {
    std::uniform_real_distribution<double> u(0.05, 1.5);
    std::vector<double> g(s);
    for (auto& v : g) v = u(rng);
    return g;
}

}  // namespace

TEST_CASE("phi examples") {
    CHECK(phi({0, 0, 0}, 1, 1, 2) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(phi({1, 0, 1}, 1, 1, 2) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(phi({1, 1, 1}, 1, 1, 2) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS(phi({2}, 1, 1, 2));
    // the value only depends on the first nonzero digit, at any depth
    CHECK(phi({0, 1}, 2, 3, 3) == phi({0, 1, 2, 2, 0, 1}, 2, 3, 3));
}

TEST_CASE("grouped Walsh series equals literal enumeration") {
    std::mt19937_64 rng(2);
    struct Cfg { int b, L; };
    for (Cfg c : {Cfg{2, 12}, Cfg{3, 7}, Cfg{5, 5}}) {
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<Digit> z(c.L);
            for (auto& v : z) v = static_cast<Digit>(rng() % c.b);
            if (trial == 0) std::fill(z.begin(), z.end(), 0);
            for (int a = 1; a <= 2; ++a)
                CHECK(oracle::phi_series_grouped(z, a, 2, c.b, c.L) ==
                      doctest::Approx(oracle::phi_series_literal(z, a, 2, c.b, c.L)).epsilon(1e-11));
        }
    }
}

TEST_CASE("phi equals its Walsh series") {
    std::mt19937_64 rng(8);
    for (int b : {2, 3, 5})
        for (int alpha = 1; alpha <= 3; ++alpha)
            for (int d = 1; d <= 3; ++d)
                for (int trial = 0; trial < 20; ++trial) {
                    std::vector<Digit> z(6);
                    for (auto& v : z) v = static_cast<Digit>(rng() % b);
                    double series = oracle::phi_series_grouped(z, alpha, d, b, 20);
                    CHECK(std::abs(phi(z, alpha, d, b) - series) < 1e-9);
                }
}

TEST_CASE("criterion_product examples") {
    ModulusContext ctx = ModulusContext::make(2, 2);
    SmoothnessParams sp{1, 1};
    CHECK(criterion_product({Poly({1})}, ctx, sp, Weights::make_product({0.0})) == 0.0);
    CHECK(criterion_product({Poly({1})}, ctx, sp, Weights::make_product({1.0})) ==
          doctest::Approx(1.0 / 48.0).epsilon(1e-14));
    CHECK(criterion_tau1_closed_form(2, 2, sp, 1.0) == doctest::Approx(1.0 / 48.0).epsilon(1e-15));
}

TEST_CASE("product and general forms agree") {
    std::mt19937_64 rng(12);
    for (int b : {2, 3})
        for (int m = 1; m <= 4; ++m) {
            ModulusContext ctx = ModulusContext::make(b, m);
            for (int d = 1; d <= 3; ++d)
                for (int alpha = 1; alpha <= 3; ++alpha) {
                    int s = 1 + static_cast<int>(rng() % 3);
                    SmoothnessParams sp{alpha, d};
                    auto g = random_gamma(rng, s);
                    GeneratingVector q = random_q(rng, ctx, d * s);
                    double P = criterion_product(q, ctx, sp, Weights::make_product(g));
                    double G = criterion_general(q, ctx, sp, Weights::product_as_general(g));
                    CHECK(std::abs(P - G) <= 1e-12 * std::max(1.0, std::abs(P)));
                    CHECK(P >= -1e-12);
                }
        }
    // single subset weight on {1}
    ModulusContext ctx = ModulusContext::make(2, 3);
    SmoothnessParams sp{2, 2};
    GeneratingVector q{Poly({1}), Poly({1, 1})};
    CHECK(criterion_general(q, ctx, sp, Weights::make_general(1, {{1u, 1.0}})) ==
          doctest::Approx(criterion_product(q, ctx, sp, Weights::make_product({1.0}))).epsilon(1e-13));
    CHECK(criterion_general(q, ctx, sp, Weights::make_general(1, {})) == 0.0);
}

TEST_CASE("grouped dual sum equals the literal dual enumeration") {
    std::mt19937_64 rng(31);
    for (int m = 1; m <= 2; ++m) {
        ModulusContext ctx = ModulusContext::make(2, m);
        for (int d = 1; d <= 2; ++d) {
            SmoothnessParams sp{1, d};
            int s = 2 / d;
            GeneratingVector q = random_q(rng, ctx, d * s);
            std::map<Subset, double> g;
            for (Subset u = 1; u < (Subset{1} << s); ++u) g[u] = 0.2 + 0.3 * u;
            Weights w = Weights::make_general(s, g);
            int K = 5;
            CHECK(criterion_bruteforce(q, ctx, sp, w, K) ==
                  doctest::Approx(oracle::criterion_dual_literal(q, ctx, sp, w, K)).epsilon(1e-12));
            CHECK(criterion_bruteforce(q, ctx, sp, w, 1) ==
                  doctest::Approx(oracle::criterion_dual_literal(q, ctx, sp, w, 1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("criterion matches the dual-lattice sum") {
    std::mt19937_64 rng(17);
    for (int m = 1; m <= 3; ++m) {
        ModulusContext ctx = ModulusContext::make(2, m);
        for (int d = 1; d <= 2; ++d)
            for (int alpha = 2; alpha <= 3; ++alpha) {
                SmoothnessParams sp{alpha, d};
                int s = 4 / d;
                GeneratingVector q = random_q(rng, ctx, d * s);
                std::map<Subset, double> g;
                std::uniform_real_distribution<double> u(0.0, 1.0);
                for (Subset v = 1; v < (Subset{1} << s); ++v) g[v] = u(rng);
                Weights w = Weights::make_general(s, g);
                double exact = criterion_general(q, ctx, sp, w);
                double brute = criterion_bruteforce(q, ctx, sp, w, 12);
                CHECK(std::abs(exact - brute) <= 1e-6 * exact);
            }
    }
}

TEST_CASE("dual sum for s=1, d=1, q=1 is a geometric series") {
    // only multiples of b^m contribute; their digit lengths start at m+1
    ModulusContext ctx = ModulusContext::make(2, 3);
    SmoothnessParams sp{1, 1};
    double by_hand = 0.0;
    for (int a = 4; a <= 30; ++a) by_hand += std::ldexp(1.0, a - 4) * std::pow(2.0, -3.0 * (a - 1));
    CHECK(criterion_bruteforce({Poly({1})}, ctx, sp, Weights::make_product({1.0}), 30) ==
          doctest::Approx(by_hand).epsilon(1e-12));
    CHECK(criterion_product({Poly({1})}, ctx, sp, Weights::make_product({1.0})) ==
          doctest::Approx(by_hand).epsilon(1e-8));
}

TEST_CASE("partial criterion consistency") {
    std::mt19937_64 rng(23);
    for (int b : {2, 3}) {
        ModulusContext ctx = ModulusContext::make(b, 3);
        for (int d = 1; d <= 3; ++d) {
            SmoothnessParams sp{2, d};
            int s = 3;
            auto g = random_gamma(rng, s);
            Weights wp = Weights::make_product(g);
            Weights wg = Weights::product_as_general(g);
            GeneratingVector q = random_q(rng, ctx, d * s);
            CHECK(criterion_partial(q, ctx, sp, wp) == doctest::Approx(criterion_product(q, ctx, sp, wp)));
            for (int tau = 1; tau <= d * s; ++tau) {
                GeneratingVector qt(q.begin(), q.begin() + tau);
                double a = criterion_partial(qt, ctx, sp, wp);
                double c = criterion_partial(qt, ctx, sp, wg);
                CHECK(std::abs(a - c) <= 1e-12 * std::max(1.0, a));
                if (tau % d == 0) {
                    int j = tau / d;
                    CHECK(a == doctest::Approx(criterion_product(qt, ctx, sp, wp.restricted(j))).epsilon(1e-13));
                }
            }
            GeneratingVector q1{Poly({1})};
            CHECK(criterion_partial(q1, ctx, sp, wp) ==
                  doctest::Approx(criterion_tau1_closed_form(b, 3, sp, g[0])).epsilon(1e-13));
        }
    }
}

TEST_CASE("criterion is monotone in the weights") {
    std::mt19937_64 rng(29);
    ModulusContext ctx = ModulusContext::make(2, 4);
    SmoothnessParams sp{1, 2};
    GeneratingVector q = random_q(rng, ctx, 4);
    std::map<Subset, double> g{{1u, 0.3}, {2u, 0.4}, {3u, 0.1}};
    double base = criterion_general(q, ctx, sp, Weights::make_general(2, g));
    for (Subset u = 1; u <= 3; ++u) {
        auto h = g;
        h[u] += 0.5;
        CHECK(criterion_general(q, ctx, sp, Weights::make_general(2, h)) >= base);
    }
}

TEST_CASE("weights validation") {
    CHECK_THROWS(Weights::make_product({-1.0}));
    CHECK_THROWS(Weights::make_general(2, {{4u, 1.0}}));
    CHECK_THROWS(Weights::make_general(21, {}));
    ModulusContext ctx = ModulusContext::make(2, 2);
    CHECK_THROWS(criterion_product({Poly({1})}, ctx, {1, 2}, Weights::make_product({1.0})));
}
