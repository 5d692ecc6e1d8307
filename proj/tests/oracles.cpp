#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "iplr/interlace.hpp"

namespace oracle {

static std::complex<double> omega_pow(long long e, int b) {
    e %= b;
    double ang = 2.0 * std::numbers::pi * static_cast<double>(e) / b;
    return {std::cos(ang), std::sin(ang)};
}

double phi_series_literal(const std::vector<Digit>& z, int alpha, int d, int b, int L) {
    std::vector<Digit> x = z;
    x.resize(std::max<std::size_t>(x.size(), L), 0);
    std::uint64_t end = iplr::ipow(b, L);
    std::complex<double> acc = 0.0;
    for (std::uint64_t k = 1; k < end; ++k) {
        long long e = 0;
        std::uint64_t t = k;
        for (int i = 0; t > 0; ++i, t /= b) e += static_cast<long long>(t % b) * x[i];
        acc += iplr::r_weight(k, alpha, d, b) * omega_pow(e, b);
    }
    return acc.real();
}

double phi_series_grouped(const std::vector<Digit>& z, int alpha, int d, int b, int L) {
    std::vector<Digit> x = z;
    x.resize(std::max<std::size_t>(x.size(), L), 0);
    int amin = std::min(alpha, d);
    std::complex<double> total = 0.0;
    std::complex<double> lower = 1.0;  // product over the free lower digits
    for (int a = 1; a <= L; ++a) {
        std::complex<double> top = 0.0;
        for (int kappa = 1; kappa < b; ++kappa) top += omega_pow(static_cast<long long>(kappa) * x[a - 1], b);
        double r = std::pow(static_cast<double>(b), -(2.0 * amin + 1.0) * (a - 1));
        total += r * lower * top;
        std::complex<double> full = 0.0;
        for (int kappa = 0; kappa < b; ++kappa) full += omega_pow(static_cast<long long>(kappa) * x[a - 1], b);
        lower *= full;
    }
    return total.real();
}

double criterion_dual_literal(const iplr::GeneratingVector& q, const iplr::ModulusContext& ctx,
                              const iplr::SmoothnessParams& sp, const iplr::Weights& w, int K) {
    const int b = ctx.b();
    const int ds = static_cast<int>(q.size());
    const std::uint64_t per = iplr::ipow(b, K);
    const std::uint64_t total = iplr::ipow(per, ds);
    std::vector<std::uint64_t> k(ds);
    double sum = 0.0;
    for (std::uint64_t idx = 1; idx < total; ++idx) {
        std::uint64_t t = idx;
        iplr::Subset v = 0;
        for (int i = 0; i < ds; ++i) {
            k[i] = t % per;
            t /= per;
            if (k[i] != 0) v |= iplr::Subset{1} << (i / sp.d);
        }
        if (!iplr::dual_contains(k, q, ctx)) continue;
        sum += std::pow(sp.c_factor(), std::popcount(v)) * w.gamma(v) * iplr::r_weight(k, sp.alpha, sp.d, b);
    }
    return sum;
}

double exhaustive_min_criterion(const iplr::ModulusContext& ctx, int s, const iplr::SmoothnessParams& sp,
                                const iplr::Weights& w) {
    const int ds = sp.d * s;
    const std::uint64_t L = ctx.order;
    std::uint64_t combos = iplr::ipow(L, ds - 1);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t idx = 0; idx < combos; ++idx) {
        iplr::GeneratingVector q{iplr::Poly({1})};
        std::uint64_t t = idx;
        for (int i = 1; i < ds; ++i) {
            q.push_back(iplr::unpack(t % L + 1, ctx.b()));
            t /= L;
        }
        best = std::min(best, iplr::criterion_partial(q, ctx, sp, w));
    }
    return best;
}

std::map<std::vector<int>, std::vector<std::size_t>> elementary_counts(const iplr::DigitMatrix& pts, int m) {
    std::map<std::vector<int>, std::vector<std::size_t>> out;
    const int dim = pts.dim;
    std::vector<int> kv(dim, 0);
    // iterate every vector of digit counts with total <= m
    for (;;) {
        int total = 0;
        for (int k : kv) total += k;
        if (total <= m) {
            std::map<std::vector<int>, std::size_t> boxes;
            for (std::size_t n = 0; n < pts.n_points; ++n) {
                std::vector<int> key;
                for (int j = 0; j < dim; ++j)
                    for (int l = 0; l < kv[j]; ++l) key.push_back(pts.at(n, j)[l]);
                ++boxes[key];
            }
            std::vector<std::size_t>& c = out[kv];
            for (const auto& [key, n] : boxes) c.push_back(n);
            std::sort(c.begin(), c.end());
        }
        int j = 0;
        while (j < dim && kv[j] == m) kv[j++] = 0;
        if (j == dim) break;
        ++kv[j];
    }
    return out;
}

std::vector<int> long_division_digits_gf2(std::uint64_t numer, std::uint64_t p, int m, int depth) {
    // numer/p = sum_l t_l x^{-l}: shift numer left by depth, divide as integers-of-bits
    std::vector<int> t(depth, 0);
    unsigned __int128 num = static_cast<unsigned __int128>(numer) << depth;
    unsigned __int128 quo = 0;
    int top = 127;
    while (top >= 0 && !((num >> top) & 1)) --top;
    for (int i = top; i >= m; --i) {
        if ((num >> i) & 1) {
            num ^= static_cast<unsigned __int128>(p) << (i - m);
            quo |= static_cast<unsigned __int128>(1) << (i - m);
        }
    }
    for (int l = 1; l <= depth; ++l) t[l - 1] = static_cast<int>((quo >> (depth - l)) & 1);
    return t;
}

}  // namespace oracle
