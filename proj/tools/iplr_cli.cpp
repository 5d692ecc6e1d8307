#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "iplr/bounds.hpp"
#include "iplr/cbc.hpp"
#include "iplr/estimator.hpp"
#include "iplr/parallel.hpp"
#include "iplr/scramble.hpp"
#include "iplr/sweep.hpp"

using namespace iplr;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad weight value '" + tok + "'");
        }
        if (used != tok.size()) throw std::invalid_argument("bad weight value '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("empty weight list");
    return out;
}

// product:g1,g2,... (one value is broadcast), product-decay[:j^-2], general:<json file>
Weights parse_weights(const std::string& spec, int s) {
    if (spec.rfind("product-decay", 0) == 0) {
        std::string rest = spec.substr(13);
        if (!rest.empty() && rest != ":j^-2") throw std::invalid_argument("unknown decay '" + rest + "'");
        std::vector<double> g(s);
        for (int j = 0; j < s; ++j) g[j] = 1.0 / ((j + 1.0) * (j + 1.0));
        return Weights::make_product(g);
    }
    if (spec.rfind("product:", 0) == 0) {
        std::vector<double> g = parse_list(spec.substr(8));
        if (g.size() == 1) g.assign(s, g[0]);
        if (static_cast<int>(g.size()) != s)
            throw std::invalid_argument("product weights need 1 or s values");
        return Weights::make_product(g);
    }
    if (spec.rfind("general:", 0) == 0) {
        std::string path = spec.substr(8);
        std::ifstream is(path);
        if (!is) throw std::invalid_argument("cannot read weight file " + path);
        std::stringstream ss;
        ss << is.rdbuf();
        Weights w = weights_from_json(ss.str());
        if (w.s != s) throw std::invalid_argument("general weights dimension differs from --s");
        return w;
    }
    throw std::invalid_argument("unknown weights spec '" + spec + "'");
}

// Writes to path, or stdout for "" / "-".
template <class F>
void with_output(const std::string& path, bool binary, F&& body) {
    if (path.empty() || path == "-") {
        body(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path, binary ? std::ios::binary : std::ios::out);
    if (!os) throw std::invalid_argument("cannot write " + path);
    body(os);
    if (!os) throw std::runtime_error("write failed: " + path);
}

struct ConstructArgs {
    int b = 2, m = 4, s = 1, d = 1, alpha = 1;
    std::string weights = "product:1";
    bool fast = false, naive = false;
    std::string out;
};

int run_construct(const ConstructArgs& a) {
    if (a.fast && a.naive) throw std::invalid_argument("--fast and --naive are exclusive");
    if (a.s < 1) throw std::invalid_argument("--s must be >= 1");
    Weights w = parse_weights(a.weights, a.s);
    Construction how = a.naive ? Construction::Naive : Construction::Fast;
    if (w.kind == Weights::Kind::General) how = Construction::Naive;
    CbcResult res = cbc_construct(how, a.b, a.m, a.s, a.d, a.alpha, w);
    if (a.out.empty() || a.out == "-") {
        std::cout << rule_to_json(res.rule);
    } else {
        save_rule(res.rule, a.out);
        std::cout << "B " << fmt(res.rule.criterion_value) << "\n";
    }
    return 0;
}

struct SweepArgs {
    std::string preset;
    std::vector<std::string> configs;
    int m_lo = 4, m_hi = 14, b = 2;
    bool naive = false;
    std::string out;
};

SweepItem parse_item(const std::string& text) {
    // alpha,d,s[,weights]
    std::stringstream ss(text);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ss, tok, ',')) parts.push_back(tok);
    if (parts.size() < 3 || parts.size() > 4) throw std::invalid_argument("--config wants alpha,d,s[,weights]");
    SweepItem it;
    try {
        it.alpha = std::stoi(parts[0]);
        it.d = std::stoi(parts[1]);
        it.s = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad --config '" + text + "'");
    }
    if (parts.size() == 4) it.weights = parts[3];
    return it;
}

int run_sweep_cmd(const SweepArgs& a) {
    SweepConfig cfg;
    cfg.b = a.b;
    cfg.m_lo = a.m_lo;
    cfg.m_hi = a.m_hi;
    cfg.construction = a.naive ? Construction::Naive : Construction::Fast;
    if (!a.preset.empty()) cfg.items = sweep_preset(a.preset);
    for (const std::string& c : a.configs) cfg.items.push_back(parse_item(c));
    cfg.validate();
    SweepResult res = run_sweep(cfg);
    with_output(a.out, false, [&](std::ostream& os) { write_sweep_csv(os, cfg, res); });
    return 0;
}

struct PointsArgs {
    std::string rule;
    std::uint64_t seed = 0, replication = 0;
    bool unscrambled = false, binary = false;
    int depth = 0;
    std::string out;
};

int run_points(const PointsArgs& a) {
    RuleSpec rule = load_rule(a.rule);
    if (a.depth < 0) throw std::invalid_argument("--depth must be >= 0");
    DigitMatrix lattice = rule_points(rule, a.depth);
    DigitMatrix pts = lattice;
    if (!a.unscrambled) {
        ScrambleConfig cfg;
        cfg.seed = a.seed;
        cfg.replication_id = a.replication;
        pts = order_d_scramble(lattice, rule.d, cfg);
    }
    with_output(a.out, a.binary, [&](std::ostream& os) {
        if (a.binary) write_points_binary(os, pts);
        else write_points_text(os, pts);
    });
    return 0;
}

struct BoundArgs {
    std::string rule;
    int grid = 33;
    bool prefix = false;
};

double safe_ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

int run_bound(const BoundArgs& a) {
    RuleSpec rule = load_rule(a.rule);
    if (a.grid < 1) throw std::invalid_argument("--grid must be >= 1");
    std::vector<double> grid = lambda_grid(rule.alpha, rule.d, a.grid);
    int ds = rule.d * rule.s;
    if (a.prefix) {
        ModulusContext ctx = rule.context();
        std::cout << "tau,B,lambda,bound,ratio\n";
        for (int tau = 1; tau <= ds; ++tau) {
            GeneratingVector q(rule.q.begin(), rule.q.begin() + tau);
            double B = criterion_partial(q, ctx, rule.params(), rule.weights);
            BestBound best = best_bound_over_lambda(tau, rule.m, rule.alpha, rule.d, rule.weights, rule.b, grid);
            std::cout << tau << ',' << fmt(B) << ',' << fmt(best.lambda) << ',' << fmt(best.bound) << ','
                      << fmt(safe_ratio(B, best.bound)) << '\n';
        }
        return 0;
    }
    BestBound best = best_bound_over_lambda(ds, rule.m, rule.alpha, rule.d, rule.weights, rule.b, grid);
    double B = rule.criterion_value;
    std::cout << "B " << fmt(B) << "\n"
              << "lambda* " << fmt(best.lambda) << "\n"
              << "bound* " << fmt(best.bound) << "\n"
              << "ratio " << fmt(safe_ratio(B, best.bound)) << "\n";
    return 0;
}

struct IntegrateArgs {
    std::string rule, integrand = "product_quadratic", csv;
    int R = 30;
    std::uint64_t seed = 0;
    double c = 0.0;
    int power = 3;
    int depth = 0;
    int m_lo = 0, m_hi = 0;
};

void print_summary(const RqmcResult& r, const Integrand& f) {
    std::cout << "mean,variance,stderr,exact\n"
              << fmt(r.mean) << ',' << fmt(r.sample_variance) << ',' << fmt(r.stderr_()) << ','
              << (f.exact_integral ? fmt(*f.exact_integral) : std::string("nan")) << '\n';
}

int run_integrate(const IntegrateArgs& a) {
    RuleSpec rule = load_rule(a.rule);
    IntegrandOptions opt;
    opt.c = a.c;
    opt.power = a.power;
    Integrand f = builtin_integrand(rule.s, a.integrand, opt);
    if (a.m_lo || a.m_hi) {
        // variance study: rebuild the rule for each m with the same parameters
        if (a.m_lo < 1 || a.m_hi < a.m_lo || a.m_hi > 20) throw std::invalid_argument("need 1 <= m-lo <= m-hi <= 20");
        std::vector<double> xs, ys;
        std::cout << "m,N,mean,variance,stderr\n";
        for (int m = a.m_lo; m <= a.m_hi; ++m) {
            Construction how = rule.weights.kind == Weights::Kind::General ? Construction::Naive : Construction::Fast;
            RuleSpec r = cbc_construct(how, rule.b, m, rule.s, rule.d, rule.alpha, rule.weights).rule;
            RqmcResult res = rqmc_estimate(f, r, a.R, a.seed, a.depth);
            std::cout << m << ',' << fmt(std::pow(double(rule.b), m)) << ',' << fmt(res.mean) << ','
                      << fmt(res.sample_variance) << ',' << fmt(res.stderr_()) << '\n';
            if (res.sample_variance > 0) {
                xs.push_back(m);
                ys.push_back(std::log(res.sample_variance) / std::log(double(rule.b)));
            }
        }
        std::cout << "# variance slope " << fmt(fit_slope(xs, ys)) << "\n";
        return 0;
    }
    RqmcResult res = rqmc_estimate(f, rule, a.R, a.seed, a.depth);
    if (!a.csv.empty()) {
        with_output(a.csv, false, [&](std::ostream& os) {
            os << "replication_id,estimate\n";
            for (std::size_t i = 0; i < res.estimates.size(); ++i) os << i << ',' << fmt(res.estimates[i]) << '\n';
        });
    }
    print_summary(res, f);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interlaced scrambled polynomial lattice rules"};
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker cap (0: all cores)");

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "CBC construction of a rule");
    construct->add_option("--b", ca.b, "prime base");
    construct->add_option("--m", ca.m, "b^m points");
    construct->add_option("--s", ca.s, "dimension");
    construct->add_option("--d", ca.d, "interlacing factor");
    construct->add_option("--alpha", ca.alpha, "smoothness");
    construct->add_option("--weights", ca.weights, "product:g1,g2,... | product-decay | general:<file>");
    construct->add_flag("--fast", ca.fast, "fast CBC (default)");
    construct->add_flag("--naive", ca.naive, "naive CBC");
    construct->add_option("--out", ca.out, "rule file (default stdout)");

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "criterion values over a range of m");
    sweep->add_option("--preset", sa.preset, "fig1 | fig2 | fig3");
    sweep->add_option("--config", sa.configs, "extra config alpha,d,s[,weights]");
    sweep->add_option("--m-lo", sa.m_lo);
    sweep->add_option("--m-hi", sa.m_hi);
    sweep->add_option("--b", sa.b);
    sweep->add_flag("--naive", sa.naive);
    sweep->add_option("--out", sa.out, "CSV file (default stdout)");

    PointsArgs pa;
    auto* points = app.add_subcommand("points", "export a point set");
    points->add_option("--rule", pa.rule)->required();
    points->add_option("--seed", pa.seed);
    points->add_option("--replication", pa.replication);
    points->add_flag("--unscrambled", pa.unscrambled, "the ds-dimensional lattice set");
    points->add_option("--depth", pa.depth, "digit depth (0: default)");
    points->add_flag("--binary", pa.binary);
    points->add_option("--out", pa.out);

    BoundArgs ba;
    auto* bound = app.add_subcommand("bound", "compare B with the error bound");
    bound->add_option("--rule", ba.rule)->required();
    bound->add_option("--grid", ba.grid, "number of lambda values");
    bound->add_flag("--prefix", ba.prefix, "report every prefix tau");

    IntegrateArgs ia;
    auto* integrate = app.add_subcommand("integrate", "randomized QMC estimate");
    integrate->add_option("--rule", ia.rule)->required();
    integrate->add_option("--integrand", ia.integrand);
    integrate->add_option("--R", ia.R, "replications");
    integrate->add_option("--seed", ia.seed);
    integrate->add_option("--csv", ia.csv, "per-replication CSV");
    integrate->add_option("--c", ia.c, "product_quadratic offset");
    integrate->add_option("--power", ia.power, "product_smooth exponent");
    integrate->add_option("--depth", ia.depth);
    integrate->add_option("--m-lo", ia.m_lo, "variance study over m");
    integrate->add_option("--m-hi", ia.m_hi);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        set_thread_count(threads);
        if (*construct) return run_construct(ca);
        if (*sweep) return run_sweep_cmd(sa);
        if (*points) return run_points(pa);
        if (*bound) return run_bound(ba);
        if (*integrate) return run_integrate(ia);
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
