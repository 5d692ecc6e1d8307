#include "iplr/criterion.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "iplr/interlace.hpp"
#include "iplr/parallel.hpp"

namespace iplr {

Weights Weights::make_product(std::vector<double> gamma) {
    Weights w;
    w.kind = Kind::Product;
    w.s = static_cast<int>(gamma.size());
    w.product = std::move(gamma);
    w.validate();
    return w;
}

Weights Weights::make_general(int s, std::map<Subset, double> gamma) {
    Weights w;
    w.kind = Kind::General;
    w.s = s;
    w.general = std::move(gamma);
    w.validate();
    return w;
}

Weights Weights::product_as_general(const std::vector<double>& gamma) {
    int s = static_cast<int>(gamma.size());
    if (s > kMaxGeneralDim) throw std::invalid_argument("too many coordinates for general weights");
    std::map<Subset, double> g;
    for (Subset u = 1; u < (Subset{1} << s); ++u) {
        double v = 1.0;
        for (int j = 0; j < s; ++j)
            if (u >> j & 1) v *= gamma[j];
        g[u] = v;
    }
    return make_general(s, std::move(g));
}

double Weights::gamma(Subset u) const {
    if (u == 0) return 1.0;
    if (kind == Kind::Product) {
        double v = 1.0;
        for (int j = 0; j < s; ++j)
            if (u >> j & 1) v *= product[j];
        if (s < 32 && (u >> s) != 0) return 0.0;
        return v;
    }
    auto it = general.find(u);
    return it == general.end() ? 0.0 : it->second;
}

Weights Weights::restricted(int s_new) const {
    if (s_new > s) throw std::invalid_argument("cannot extend weights");
    if (kind == Kind::Product) return make_product(std::vector<double>(product.begin(), product.begin() + s_new));
    std::map<Subset, double> g;
    for (const auto& [u, v] : general)
        if ((u >> s_new) == 0) g[u] = v;
    return make_general(s_new, std::move(g));
}

void Weights::validate() const {
    if (s < 0) throw std::invalid_argument("negative dimension");
    if (kind == Kind::Product) {
        if (static_cast<int>(product.size()) != s) throw std::invalid_argument("product weight count mismatch");
        for (double g : product)
            if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("weights must be finite and >= 0");
    } else {
        if (s > kMaxGeneralDim) throw std::invalid_argument("general weights support s <= 20");
        for (const auto& [u, v] : general) {
            if (u == 0 || (s < 32 && (u >> s) != 0)) throw std::invalid_argument("weight subset out of range");
            if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("weights must be finite and >= 0");
        }
    }
}

double SmoothnessParams::c_factor() const {
    int e = d > alpha ? d - alpha : 0;
    return std::ldexp(1.0, 2 * e);
}

void SmoothnessParams::validate() const {
    if (alpha < 1) throw std::invalid_argument("alpha must be >= 1");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
}

DD phi_dd(int first_nonzero, int alpha, int d, int b) {
    int a = std::min(alpha, d);
    DD denom = DD(1.0) - dd_pow(b, -2 * a);
    DD num(static_cast<double>(b - 1));
    if (first_nonzero > 0) num = num - dd_pow(b, -2 * a * first_nonzero) * (dd_pow(b, 2 * a + 1) - DD(1.0));
    return num / denom;
}

double phi(const std::vector<Digit>& z, int alpha, int d, int b) {
    int idx = 0;
    for (std::size_t l = 0; l < z.size(); ++l) {
        if (z[l] >= b) throw std::invalid_argument("digit out of range");
        if (z[l] != 0) {
            idx = static_cast<int>(l) + 1;
            break;
        }
    }
    return phi_dd(idx, alpha, d, b).to_double();
}

std::vector<DD> one_plus_phi_table(int b, int m, const SmoothnessParams& sp) {
    std::uint64_t size = ipow(b, m);
    std::vector<DD> level(m + 1);
    for (int i = 0; i <= m; ++i) level[i] = DD(1.0) + phi_dd(i, sp.alpha, sp.d, b);
    std::vector<DD> out(size);
    out[0] = level[0];
    for (std::uint64_t k = 1; k < size; ++k) out[k] = level[m - mu(k, b)];
    return out;
}

namespace {

struct Layout {
    int tau = 0;
    int beta = 0;
    int last = 0;  // components in block beta
};

Layout layout(int tau, int d) {
    if (tau < 1) throw std::invalid_argument("need at least one component");
    Layout l;
    l.tau = tau;
    l.beta = (tau + d - 1) / d;
    l.last = tau - (l.beta - 1) * d;
    return l;
}

// Sum over n of term(n, A) where A[j] = prod over block j of (1 + phi).
template <class Term>
DD sum_over_points(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                   const Layout& lay, Term term) {
    std::vector<DD> opp = one_plus_phi_table(ctx.b(), ctx.m, sp);
    std::vector<std::uint32_t> qp;
    for (const Poly& p : q) {
        if (p.is_zero() || p.degree() >= ctx.m) throw std::invalid_argument("generating polynomial out of range");
        qp.push_back(static_cast<std::uint32_t>(pack(p, ctx.b())));
    }
    const std::size_t grain = 512;
    std::vector<DD> partial(chunk_count(ctx.size, grain));
    parallel_chunks(ctx.size, grain, [&](std::size_t lo, std::size_t hi, std::size_t c) {
        std::vector<DD> A(lay.beta);
        DD acc;
        for (std::size_t n = lo; n < hi; ++n) {
            int comp = 0;
            for (int j = 0; j < lay.beta; ++j) {
                int len = j + 1 == lay.beta ? lay.last : sp.d;
                DD prod(1.0);
                for (int k = 0; k < len; ++k, ++comp)
                    prod *= opp[ctx.vtab[ctx.mul(static_cast<std::uint32_t>(n), qp[comp])]];
                A[j] = prod;
            }
            acc += term(A);
        }
        partial[c] = acc;
    });
    DD total;
    for (const DD& p : partial) total += p;
    return total;
}

}  // namespace

static DD partial_product(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                          const Weights& w) {
    Layout lay = layout(static_cast<int>(q.size()), sp.d);
    if (lay.beta > w.s) throw std::invalid_argument("not enough weights for the given components");
    const double c = sp.c_factor();
    std::vector<DD> cg(lay.beta);
    for (int j = 0; j < lay.beta; ++j) cg[j] = DD(c) * DD(w.product[j]);
    DD total = sum_over_points(q, ctx, sp, lay, [&](const std::vector<DD>& A) {
        DD prod(1.0);
        for (int j = 0; j < lay.beta; ++j) prod *= DD(1.0) + cg[j] * (A[j] - DD(1.0));
        return prod;
    });
    return total / DD(static_cast<double>(ctx.size)) - DD(1.0);
}

DD criterion_partial_general_dd(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                                const Weights& w) {
    sp.validate();
    Layout lay = layout(static_cast<int>(q.size()), sp.d);
    if (lay.beta > w.s) throw std::invalid_argument("not enough weights for the given components");
    if (w.s > kMaxGeneralDim) throw std::invalid_argument("general weights support s <= 20");
    const double c = sp.c_factor();
    std::vector<std::pair<Subset, DD>> terms;
    if (w.is_product()) {
        for (Subset u = 1; u < (Subset{1} << lay.beta); ++u) terms.emplace_back(u, DD(w.gamma(u)));
    } else {
        for (const auto& [u, g] : w.general)
            if ((u >> lay.beta) == 0 && g != 0.0) terms.emplace_back(u, DD(g));
    }
    for (auto& [u, g] : terms) g = g * dd_pow(c, std::popcount(u));
    DD total = sum_over_points(q, ctx, sp, lay, [&](const std::vector<DD>& A) {
        DD acc;
        for (const auto& [u, g] : terms) {
            DD prod = g;
            for (int j = 0; j < lay.beta; ++j)
                if (u >> j & 1) prod *= A[j] - DD(1.0);
            acc += prod;
        }
        return acc;
    });
    return total / DD(static_cast<double>(ctx.size));
}

DD criterion_partial_dd(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                        const Weights& w) {
    sp.validate();
    if (w.is_product()) return partial_product(q, ctx, sp, w);
    return criterion_partial_general_dd(q, ctx, sp, w);
}

DD criterion_product_dd(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                        const Weights& w) {
    sp.validate();
    if (!w.is_product()) throw std::invalid_argument("product criterion needs product weights");
    if (q.size() != static_cast<std::size_t>(sp.d) * w.s) throw std::invalid_argument("need d*s components");
    return partial_product(q, ctx, sp, w);
}

DD criterion_general_dd(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                        const Weights& w) {
    if (q.size() != static_cast<std::size_t>(sp.d) * w.s) throw std::invalid_argument("need d*s components");
    return criterion_partial_general_dd(q, ctx, sp, w);
}

double criterion_product(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                         const Weights& w) {
    return criterion_product_dd(q, ctx, sp, w).to_double();
}

double criterion_general(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                         const Weights& w) {
    return criterion_general_dd(q, ctx, sp, w).to_double();
}

double criterion_partial(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                         const Weights& w) {
    return criterion_partial_dd(q, ctx, sp, w).to_double();
}

double criterion_bruteforce(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                            const Weights& w, int K) {
    sp.validate();
    const int b = ctx.b();
    const int m = ctx.m;
    const int ds = static_cast<int>(q.size());
    if (ds % sp.d != 0) throw std::invalid_argument("need a multiple of d components");
    if (ds > 16) throw std::invalid_argument("too many components for enumeration");
    const std::uint64_t low_count = K >= m ? ctx.size : ipow(b, K);
    const std::uint64_t high_count = K >= m ? ipow(b, K - m) : 1;

    // rho[kappa] = sum of r(k) over nonzero k < b^K with low part kappa
    std::vector<double> rho(low_count, 0.0);
    double high_tail = 0.0;
    // h b^m with digit length len: (b-1) b^(len-1-m) values of h, all with the same r
    for (int len = m + 1; len <= K && high_count > 1; ++len)
        high_tail += static_cast<double>((b - 1) * ipow(b, len - 1 - m)) *
                     r_weight(ipow(b, len - 1), sp.alpha, sp.d, b);
    for (std::uint64_t kappa = 0; kappa < low_count; ++kappa) {
        // kappa + h b^m has the same digit length as h b^m for h >= 1
        rho[kappa] = high_tail + (kappa == 0 ? 0.0 : r_weight(kappa, sp.alpha, sp.d, b));
    }

    const double c = sp.c_factor();
    std::vector<std::uint64_t> kappa(ds, 0);
    double total = 0.0;
    std::uint64_t combos = ipow(low_count, ds);
    for (std::uint64_t idx = 0; idx < combos; ++idx) {
        std::uint64_t t = idx;
        Subset forced = 0;
        for (int i = 0; i < ds; ++i) {
            kappa[i] = t % low_count;
            t /= low_count;
            if (kappa[i] != 0) forced |= Subset{1} << i;
        }
        if (!dual_contains(kappa, q, ctx)) continue;
        // every support u containing the nonzero low parts
        for (Subset u = 1; u < (Subset{1} << ds); ++u) {
            if ((u & forced) != forced) continue;
            double r = 1.0;
            Subset v = 0;
            for (int i = 0; i < ds; ++i)
                if (u >> i & 1) {
                    r *= rho[kappa[i]];
                    v |= Subset{1} << (i / sp.d);
                }
            if (r == 0.0) continue;
            total += std::pow(c, std::popcount(v)) * w.gamma(v) * r;
        }
    }
    return total;
}

double criterion_tau1_closed_form(int b, int m, const SmoothnessParams& sp, double gamma1) {
    int a = sp.amin();
    DD num = DD(sp.c_factor()) * DD(gamma1) * DD(static_cast<double>(b - 1));
    DD den = dd_pow(b, (2 * a + 1) * m) * (DD(1.0) - dd_pow(b, -2 * a));
    return (num / den).to_double();
}

}  // namespace iplr
