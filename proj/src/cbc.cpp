#include "iplr/cbc.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "iplr/parallel.hpp"

namespace iplr {

namespace {

std::mutex g_fftw_mu;  // the FFTW planner is not thread-safe

void check_config(int b, int m, int s, int d, int alpha, const Weights& w) {
    PrimeBase base(b);
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    if (s < 1) throw std::invalid_argument("s must be >= 1");
    SmoothnessParams{alpha, d}.validate();
    if (w.s != s) throw std::invalid_argument("weights must cover exactly s coordinates");
    w.validate();
}

// Nonzero residues sorted by the lexicographic order of their coefficient vectors.
std::vector<std::uint32_t> candidates_lex(const ModulusContext& ctx) {
    std::vector<std::uint32_t> c(ctx.order);
    std::iota(c.begin(), c.end(), 1u);
    std::sort(c.begin(), c.end(), [&](std::uint32_t x, std::uint32_t y) {
        return lex_key(x, ctx.b(), ctx.m) < lex_key(y, ctx.b(), ctx.m);
    });
    return c;
}

// Index of the lexicographically first value within the tie tolerance of the minimum.
std::size_t select_min(const std::vector<DD>& values, double tie_rel) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] < values[best]) best = i;
    double tol = tie_rel * std::abs(values[best].to_double());
    for (std::size_t i = 0; i < values.size(); ++i)
        if ((values[i] - values[best]).to_double() <= tol) return i;
    return best;
}

RuleSpec base_rule(const ModulusContext& ctx, int s, int d, int alpha, const Weights& w, Construction how) {
    RuleSpec r;
    r.b = ctx.b();
    r.m = ctx.m;
    r.s = s;
    r.d = d;
    r.alpha = alpha;
    r.p = ctx.p;
    r.weights = w;
    r.construction = how;
    return r;
}

}  // namespace

CbcResult cbc_naive(int b, int m, int s, int d, int alpha, const Weights& w, const CbcOptions& opt) {
    check_config(b, m, s, d, alpha, w);
    ModulusContext ctx = ModulusContext::make(b, m);
    SmoothnessParams sp{alpha, d};
    CbcResult res;
    res.rule = base_rule(ctx, s, d, alpha, w, Construction::Naive);
    GeneratingVector q{Poly({1})};
    DD v1 = criterion_partial_dd(q, ctx, sp, w);
    res.steps.push_back({1, v1, v1.to_double(), 1});

    std::vector<std::uint32_t> cands = candidates_lex(ctx);
    for (int tau = 2; tau <= d * s; ++tau) {
        std::vector<DD> values(cands.size());
        parallel_chunks(cands.size(), 1, [&](std::size_t lo, std::size_t hi, std::size_t) {
            for (std::size_t i = lo; i < hi; ++i) {
                GeneratingVector trial = q;
                trial.push_back(unpack(cands[i], b));
                values[i] = criterion_partial_dd(trial, ctx, sp, w);
            }
        });
        std::size_t pick = select_min(values, opt.tie_rel);
        DD sum;
        for (const DD& v : values) sum += v;
        q.push_back(unpack(cands[pick], b));
        res.steps.push_back({tau, values[pick], sum.to_double() / static_cast<double>(values.size()),
                             values.size()});
    }
    res.rule.q = q;
    res.rule.criterion_value = res.steps.back().value.to_double();
    return res;
}

CbcState initial_state(const ModulusContext& ctx) {
    CbcState st;
    st.P.assign(ctx.size, DD(1.0));
    st.Q.assign(ctx.size, DD(1.0));
    return st;
}

void update_state(CbcState& st, const Poly& q_new, const ModulusContext& ctx, const SmoothnessParams& sp,
                  const Weights& w) {
    if (!w.is_product()) throw std::invalid_argument("state updates need product weights");
    if (q_new.is_zero() || q_new.degree() >= ctx.m) throw std::invalid_argument("candidate outside R_{b,m}");
    std::vector<DD> opp = one_plus_phi_table(ctx.b(), ctx.m, sp);
    auto qr = static_cast<std::uint32_t>(pack(q_new, ctx.b()));
    int tau = st.tau + 1;
    int beta = (tau + sp.d - 1) / sp.d;
    if (beta > w.s) throw std::invalid_argument("more components than coordinates");
    bool completes = tau - (beta - 1) * sp.d == sp.d;
    DD cg = DD(sp.c_factor()) * DD(w.product[beta - 1]);
    for (std::size_t n = 0; n < ctx.size; ++n) {
        const DD& f = opp[ctx.vtab[ctx.mul(static_cast<std::uint32_t>(n), qr)]];
        if (completes) {
            st.P[n] *= DD(1.0) + cg * (st.Q[n] * f - DD(1.0));
            st.Q[n] = DD(1.0);
        } else {
            st.Q[n] *= f;
        }
    }
    st.tau = tau;
    st.chosen.push_back(q_new);
}

DD state_value(const CbcState& st, const ModulusContext& ctx, const SmoothnessParams& sp, const Weights& w) {
    if (st.tau == 0) return DD(0.0);
    int beta = (st.tau + sp.d - 1) / sp.d;
    bool complete = st.tau - (beta - 1) * sp.d == sp.d;
    DD cg = DD(sp.c_factor()) * DD(w.product[beta - 1]);
    DD sum;
    for (std::size_t n = 0; n < ctx.size; ++n)
        sum += complete ? st.P[n] : st.P[n] * (DD(1.0) + cg * (st.Q[n] - DD(1.0)));
    return sum / DD(static_cast<double>(ctx.size)) - DD(1.0);
}

CbcResult cbc_fast(int b, int m, int s, int d, int alpha, const Weights& w, const CbcOptions& opt) {
    check_config(b, m, s, d, alpha, w);
    if (!w.is_product()) throw std::invalid_argument("fast CBC needs product weights");
    ModulusContext ctx = ModulusContext::make(b, m);
    SmoothnessParams sp{alpha, d};
    CbcResult res;
    res.rule = base_rule(ctx, s, d, alpha, w, Construction::Fast);

    const std::size_t L = ctx.order;
    const double N = static_cast<double>(ctx.size);
    std::vector<DD> opp = one_plus_phi_table(b, m, sp);
    // F[e] = 1 + phi(v(g^e / p))
    std::vector<DD> F(L);
    std::vector<double> Fd(L);
    for (std::size_t e = 0; e < L; ++e) {
        F[e] = opp[ctx.vtab[ctx.pow_table[e]]];
        Fd[e] = F[e].to_double();
    }
    std::vector<std::uint64_t> lex(L);
    for (std::size_t e = 0; e < L; ++e) lex[e] = lex_key(ctx.pow_table[e], b, m);

    CbcState st = initial_state(ctx);
    update_state(st, Poly({1}), ctx, sp, w);
    DD v1 = state_value(st, ctx, sp, w);
    res.steps.push_back({1, v1, v1.to_double(), 1});

    for (int tau = 2; tau <= d * s; ++tau) {
        int beta = (tau + d - 1) / d;
        double cgd = sp.c_factor() * w.product[beta - 1];
        DD cg = DD(sp.c_factor()) * DD(w.product[beta - 1]);
        std::vector<DD> wexp(L);
        for (std::size_t i = 0; i < L; ++i) {
            std::uint32_t n = ctx.pow_table[i];
            wexp[i] = st.P[n] * st.Q[n];
        }
        DD sumP;
        for (const DD& p : st.P) sumP += p;
        DD base = (DD(1.0) - cg) * sumP + cg * st.P[0] * st.Q[0] * opp[0];

        auto exact_S = [&](std::size_t z) {
            DD acc;
            for (std::size_t i = 0, e = z; i < L; ++i, e = (e + 1 == L ? 0 : e + 1)) acc += wexp[i] * F[e];
            return acc;
        };
        auto value_of = [&](const DD& S) { return (base + cg * S) / DD(N) - DD(1.0); };

        std::vector<std::size_t> pool;
        std::vector<double> approx;
        if (L == 1 || cgd == 0.0) {
            // all candidates share one value
            pool.assign(1, static_cast<std::size_t>(std::min_element(lex.begin(), lex.end()) - lex.begin()));
        } else {
            std::vector<double> a(L);
            double abs_sum = 0.0;
            for (std::size_t j = 0; j < L; ++j) {
                a[j] = wexp[(L - j) % L].to_double();
                abs_sum += std::abs(a[j]);
            }
            approx = cyclic_convolution(a, Fd);
            double fmax = *std::max_element(Fd.begin(), Fd.end());
            std::size_t M = 1;
            while (M < 2 * L - 1) M <<= 1;
            double E = 64.0 * std::numeric_limits<double>::epsilon() * (std::log2(static_cast<double>(M)) + 2.0) *
                       abs_sum * fmax;
            double smin = *std::min_element(approx.begin(), approx.end());
            double vmin = value_of(DD(smin)).to_double();
            double verr = cgd * E / N;
            double tol_S = opt.tie_rel * (std::abs(vmin) + verr) * N / cgd;
            double cut = smin + 2.0 * E + tol_S * (1.0 + 1e-6);
            for (std::size_t z = 0; z < L; ++z)
                if (approx[z] <= cut) pool.push_back(z);
        }
        // exact values on the surviving candidates, in lexicographic order
        std::sort(pool.begin(), pool.end(), [&](std::size_t x, std::size_t y) { return lex[x] < lex[y]; });
        std::vector<DD> values(pool.size());
        parallel_chunks(pool.size(), 8, [&](std::size_t lo, std::size_t hi, std::size_t) {
            for (std::size_t i = lo; i < hi; ++i) values[i] = value_of(exact_S(pool[i]));
        });
        std::size_t pick = select_min(values, opt.tie_rel);
        double average = values[pick].to_double();
        if (!approx.empty()) {
            double sum = 0.0;
            for (double x : approx) sum += x;
            average = value_of(DD(sum / static_cast<double>(L))).to_double();
        }
        update_state(st, unpack(ctx.pow_table[pool[pick]], b), ctx, sp, w);
        res.steps.push_back({tau, state_value(st, ctx, sp, w), average, pool.size()});
    }
    res.rule.q = st.chosen;
    res.rule.criterion_value = res.steps.back().value.to_double();
    return res;
}

CbcResult cbc_construct(Construction how, int b, int m, int s, int d, int alpha, const Weights& w,
                        const CbcOptions& opt) {
    return how == Construction::Fast ? cbc_fast(b, m, s, d, alpha, w, opt) : cbc_naive(b, m, s, d, alpha, w, opt);
}

std::vector<double> cyclic_convolution_direct(const std::vector<double>& a, const std::vector<double>& c) {
    if (a.size() != c.size()) throw std::invalid_argument("length mismatch");
    std::size_t L = a.size();
    std::vector<double> out(L, 0.0);
    for (std::size_t z = 0; z < L; ++z) {
        double acc = 0.0;
        for (std::size_t j = 0; j < L; ++j) acc += a[j] * c[(z + L - j) % L];
        out[z] = acc;
    }
    return out;
}

std::vector<double> cyclic_convolution(const std::vector<double>& a, const std::vector<double>& c) {
    if (a.size() != c.size()) throw std::invalid_argument("length mismatch");
    const std::size_t L = a.size();
    if (L == 0) return {};
    if (L < 32) return cyclic_convolution_direct(a, c);
    std::size_t M = 1;
    while (M < 2 * L - 1) M <<= 1;
    const std::size_t H = M / 2 + 1;
    double* x = fftw_alloc_real(M);
    double* y = fftw_alloc_real(M);
    fftw_complex* X = fftw_alloc_complex(H);
    fftw_complex* Y = fftw_alloc_complex(H);
    fftw_plan px, py, pinv;
    {
        std::lock_guard<std::mutex> lock(g_fftw_mu);
        px = fftw_plan_dft_r2c_1d(static_cast<int>(M), x, X, FFTW_ESTIMATE);
        py = fftw_plan_dft_r2c_1d(static_cast<int>(M), y, Y, FFTW_ESTIMATE);
        pinv = fftw_plan_dft_c2r_1d(static_cast<int>(M), X, x, FFTW_ESTIMATE);
    }
    std::fill(x, x + M, 0.0);
    std::fill(y, y + M, 0.0);
    std::copy(a.begin(), a.end(), x);
    std::copy(c.begin(), c.end(), y);
    fftw_execute(px);
    fftw_execute(py);
    for (std::size_t k = 0; k < H; ++k) {
        double re = X[k][0] * Y[k][0] - X[k][1] * Y[k][1];
        double im = X[k][0] * Y[k][1] + X[k][1] * Y[k][0];
        X[k][0] = re;
        X[k][1] = im;
    }
    fftw_execute(pinv);
    // fold the linear convolution back onto length L
    std::vector<double> out(L);
    for (std::size_t z = 0; z < L; ++z) {
        double v = x[z];
        if (z + L < 2 * L - 1) v += x[z + L];
        out[z] = v / static_cast<double>(M);
    }
    {
        std::lock_guard<std::mutex> lock(g_fftw_mu);
        fftw_destroy_plan(px);
        fftw_destroy_plan(py);
        fftw_destroy_plan(pinv);
    }
    fftw_free(x);
    fftw_free(y);
    fftw_free(X);
    fftw_free(Y);
    return out;
}

DD rule_criterion(const RuleSpec& rule) {
    ModulusContext ctx = rule.context();
    return criterion_partial_dd(rule.q, ctx, rule.params(), rule.weights);
}

using nlohmann::json;

static json weights_json(const Weights& w) {
    json j;
    if (w.is_product()) {
        j["type"] = "product";
        j["gamma"] = w.product;
    } else {
        j["type"] = "general";
        j["s"] = w.s;
        json g = json::object();
        for (const auto& [u, v] : w.general) {
            std::string key;
            for (int i = 0; i < 32; ++i)
                if (u >> i & 1) key += (key.empty() ? "" : ",") + std::to_string(i + 1);
            g[key] = v;
        }
        j["gamma"] = g;
    }
    return j;
}

static Weights weights_from(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "product") return Weights::make_product(j.at("gamma").get<std::vector<double>>());
    if (type != "general") throw std::invalid_argument("unknown weight type: " + type);
    int s = j.at("s").get<int>();
    std::map<Subset, double> g;
    for (const auto& [key, val] : j.at("gamma").items()) {
        Subset u = 0;
        std::stringstream ss(key);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            int c = std::stoi(tok);
            if (c < 1 || c > s) throw std::invalid_argument("subset coordinate out of range: " + key);
            u |= Subset{1} << (c - 1);
        }
        g[u] = val.get<double>();
    }
    return Weights::make_general(s, std::move(g));
}

std::string weights_to_json(const Weights& w) { return weights_json(w).dump(); }
Weights weights_from_json(const std::string& text) { return weights_from(json::parse(text)); }

std::string rule_to_json(const RuleSpec& rule) {
    json j;
    j["format"] = "iplr-rule-1";
    j["b"] = rule.b;
    j["m"] = rule.m;
    j["s"] = rule.s;
    j["d"] = rule.d;
    j["alpha"] = rule.alpha;
    j["p"] = rule.p.coeffs;
    json q = json::array();
    for (const Poly& qj : rule.q) q.push_back(qj.coeffs);
    j["q"] = q;
    j["weights"] = weights_json(rule.weights);
    j["criterion_value"] = rule.criterion_value;
    j["construction"] = rule.construction == Construction::Fast ? "fast" : "naive";
    return j.dump(2) + "\n";
}

RuleSpec rule_from_json(const std::string& text) {
    json j = json::parse(text);
    RuleSpec r;
    r.b = j.at("b").get<int>();
    r.m = j.at("m").get<int>();
    r.s = j.at("s").get<int>();
    r.d = j.at("d").get<int>();
    r.alpha = j.at("alpha").get<int>();
    r.p = Poly(j.at("p").get<std::vector<int>>());
    for (const auto& qj : j.at("q")) r.q.emplace_back(qj.get<std::vector<int>>());
    r.weights = weights_from(j.at("weights"));
    r.criterion_value = j.at("criterion_value").get<double>();
    std::string how = j.at("construction").get<std::string>();
    if (how != "fast" && how != "naive") throw std::invalid_argument("unknown construction: " + how);
    r.construction = how == "fast" ? Construction::Fast : Construction::Naive;
    PrimeBase base(r.b);
    if (r.p.degree() != r.m) throw std::invalid_argument("modulus degree differs from m");
    if (static_cast<int>(r.q.size()) != r.d * r.s) throw std::invalid_argument("q must have d*s entries");
    for (const Poly& qj : r.q)
        if (qj.is_zero() || qj.degree() >= r.m) throw std::invalid_argument("q entry outside R_{b,m}");
    for (int c : r.p.coeffs)
        if (c < 0 || c >= r.b) throw std::invalid_argument("modulus coefficient out of range");
    if (r.weights.s != r.s) throw std::invalid_argument("weights must cover s coordinates");
    return r;
}

void save_rule(const RuleSpec& rule, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path);
    os << rule_to_json(rule);
}

RuleSpec load_rule(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return rule_from_json(ss.str());
}

}  // namespace iplr
