#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>

#include "iplr/cbc.hpp"
#include "iplr/parallel.hpp"
#include "oracles.hpp"

using namespace iplr;

TEST_CASE("cyclic convolution") {
    std::vector<double> impulse(7, 0.0), a{1, 2, 3, 4, 5, 6, 7};
    impulse[0] = 1.0;
    CHECK(cyclic_convolution(impulse, a) == a);
    std::vector<double> ones(7, 1.0);
    for (double v : cyclic_convolution_direct(ones, a)) CHECK(v == 28.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (std::size_t L : {7u, 31u, 63u, 255u, 1000u}) {
        std::vector<double> x(L), y(L);
        for (auto& v : x) v = u(rng);
        for (auto& v : y) v = u(rng);
        auto f = cyclic_convolution(x, y);
        auto g = cyclic_convolution_direct(x, y);
        double scale = 0.0;
        for (double v : g) scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < L; ++i) CHECK(std::abs(f[i] - g[i]) <= 1e-9 * scale);
    }
}

TEST_CASE("naive CBC finds the exhaustive minimum for s=1, d=1") {
    for (int m = 1; m <= 4; ++m) {
        auto res = cbc_naive(2, m, 1, 1, 1, Weights::make_product({1.0}));
        ModulusContext ctx = ModulusContext::make(2, m);
        double best = 1e300;
        for (std::uint32_t r = 1; r < ctx.size; ++r)
            best = std::min(best, criterion_product({unpack(r, 2)}, ctx, {1, 1}, Weights::make_product({1.0})));
        CHECK(res.rule.criterion_value == doctest::Approx(best).epsilon(1e-14));
        CHECK(res.rule.q[0] == Poly({1}));
    }
}

TEST_CASE("m=1, b=2 forces the all-ones vector") {
    auto res = cbc_naive(2, 1, 3, 2, 1, Weights::make_product({1.0, 0.5, 0.25}));
    for (const Poly& q : res.rule.q) CHECK(q == Poly({1}));
    auto fast = cbc_fast(2, 1, 3, 2, 1, Weights::make_product({1.0, 0.5, 0.25}));
    CHECK(fast.rule.q == res.rule.q);
}

TEST_CASE("per-step minimum never exceeds the candidate average and theta >= 0") {
    for (int d = 1; d <= 2; ++d) {
        auto res = cbc_naive(2, 5, 3, d, 1, Weights::make_product({1.0, 0.7, 0.5}));
        for (std::size_t i = 0; i < res.steps.size(); ++i) {
            CHECK(res.steps[i].value.to_double() <= res.steps[i].average * (1 + 1e-12));
            if (i > 0) CHECK((res.steps[i].value - res.steps[i - 1].value).to_double() >= -1e-12);
        }
    }
}

TEST_CASE("greedy result is bounded below by the exhaustive minimum") {
    ModulusContext ctx = ModulusContext::make(2, 3);
    SmoothnessParams sp{1, 2};
    Weights w = Weights::make_product({1.0, 0.5});
    auto res = cbc_naive(2, 3, 2, 2, 1, w);
    CHECK(res.rule.criterion_value >= oracle::exhaustive_min_criterion(ctx, 2, sp, w) * (1 - 1e-12));
}

TEST_CASE("fast CBC reproduces naive CBC") {
    for (int b : {2, 3})
        for (int m = 1; m <= (b == 2 ? 6 : 4); ++m)
            for (int d = 1; d <= 3; ++d) {
                std::vector<double> g{1.0, 0.25, 1.0 / 9.0};
                auto naive = cbc_naive(b, m, 3, d, 2, Weights::make_product(g));
                auto fast = cbc_fast(b, m, 3, d, 2, Weights::make_product(g));
                CHECK(naive.rule.q == fast.rule.q);
                CHECK(fast.rule.criterion_value == doctest::Approx(naive.rule.criterion_value).epsilon(1e-12));
            }
}

TEST_CASE("general weights use the naive path") {
    Weights w = Weights::make_general(2, {{1u, 1.0}, {2u, 0.5}, {3u, 0.2}});
    auto res = cbc_naive(2, 4, 2, 2, 1, w);
    ModulusContext ctx = ModulusContext::make(2, 4);
    CHECK(res.rule.criterion_value == doctest::Approx(criterion_general(res.rule.q, ctx, {1, 2}, w)).epsilon(1e-13));
    CHECK_THROWS(cbc_fast(2, 4, 2, 2, 1, w));
}

TEST_CASE("update_state matches recomputation from scratch") {
    ModulusContext ctx = ModulusContext::make(2, 5);
    std::mt19937_64 rng(6);
    for (int d = 1; d <= 3; ++d) {
        SmoothnessParams sp{1, d};
        Weights w = Weights::make_product({1.0, 0.0, 0.5});
        CbcState st = initial_state(ctx);
        GeneratingVector q;
        for (int tau = 1; tau <= 3 * d; ++tau) {
            Poly next = tau == 1 ? Poly({1}) : unpack(1 + rng() % ctx.order, 2);
            std::vector<DD> P_before = st.P;
            update_state(st, next, ctx, sp, w);
            q.push_back(next);
            CHECK(std::abs((state_value(st, ctx, sp, w) - criterion_partial_dd(q, ctx, sp, w)).to_double()) <= 1e-10);
            if (d == 1) {
                for (const DD& v : st.Q) CHECK(v.to_double() == 1.0);
            }
            int beta = (tau + d - 1) / d;
            if (beta == 2)
                for (std::size_t n = 0; n < ctx.size; ++n) CHECK(st.P[n].to_double() == P_before[n].to_double());
        }
    }
}

TEST_CASE("rule files round-trip bit-exactly") {
    auto res = cbc_fast(2, 6, 2, 2, 1, Weights::make_product({1.0, 1.0 / 3.0}));
    std::string text = rule_to_json(res.rule);
    RuleSpec back = rule_from_json(text);
    CHECK(back.criterion_value == res.rule.criterion_value);
    CHECK(back.q == res.rule.q);
    CHECK(back.p == res.rule.p);
    CHECK(back.weights.product == res.rule.weights.product);
    CHECK(rule_to_json(back) == text);
    CHECK(std::abs(rule_criterion(back).to_double() - back.criterion_value) <= 1e-10);

    Weights g = Weights::make_general(3, {{1u, 0.1}, {6u, 1.0 / 7.0}});
    Weights g2 = weights_from_json(weights_to_json(g));
    CHECK(g2.general == g.general);
    CHECK_THROWS(rule_from_json("{\"b\": 4}"));
}

TEST_CASE("construction is independent of the thread count") {
    set_thread_count(1);
    auto one = cbc_fast(2, 8, 2, 2, 2, Weights::make_product({1.0, 0.25}));
    set_thread_count(8);
    auto eight = cbc_fast(2, 8, 2, 2, 2, Weights::make_product({1.0, 0.25}));
    set_thread_count(0);
    CHECK(rule_to_json(one.rule) == rule_to_json(eight.rule));
}
