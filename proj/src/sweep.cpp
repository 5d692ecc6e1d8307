#include "iplr/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace iplr {

Weights SweepItem::make_weights() const {
    std::vector<double> g(s);
    for (int j = 0; j < s; ++j) {
        if (weights == "fig") g[j] = std::pow(4.0, -std::max(d - alpha, 0));
        else if (weights == "one") g[j] = 1.0;
        else if (weights == "decay") g[j] = 1.0 / ((j + 1.0) * (j + 1.0));
        else throw std::invalid_argument("unknown sweep weights: " + weights);
    }
    return Weights::make_product(std::move(g));
}

std::string SweepItem::label() const {
    return "alpha=" + std::to_string(alpha) + " d=" + std::to_string(d) + " s=" + std::to_string(s) +
           " weights=" + weights;
}

void SweepConfig::validate() const {
    PrimeBase base(b);
    if (m_lo < 4 || m_lo > m_hi || m_hi > 20) throw std::invalid_argument("need 4 <= m_lo <= m_hi <= 20");
    for (const SweepItem& it : items) {
        SmoothnessParams{it.alpha, it.d}.validate();
        if (it.s < 1) throw std::invalid_argument("s must be >= 1");
        it.make_weights();
    }
}

std::vector<SweepItem> sweep_preset(const std::string& name) {
    std::vector<SweepItem> out;
    if (name == "fig1") {
        for (auto [a, d] : {std::pair{1, 1}, {1, 2}, {1, 3}, {2, 2}, {3, 3}}) out.push_back({a, d, 1, "fig"});
    } else if (name == "fig2") {
        for (auto [a, d] : {std::pair{1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}) out.push_back({a, d, 2, "fig"});
    } else if (name == "fig3") {
        for (const char* w : {"one", "decay"})
            for (int s = 1; s <= 5; ++s) out.push_back({2, 2, s, w});
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepResult res;
    for (std::size_t id = 0; id < cfg.items.size(); ++id) {
        const SweepItem& it = cfg.items[id];
        Weights w = it.make_weights();
        std::vector<double> xs, ys;
        for (int m = cfg.m_lo; m <= cfg.m_hi; ++m) {
            CbcResult r = cbc_construct(cfg.construction, cfg.b, m, it.s, it.d, it.alpha, w);
            double B = r.rule.criterion_value;
            res.rows.push_back({static_cast<int>(id), m, std::pow(static_cast<double>(cfg.b), m), B});
            if (B > 0) {
                xs.push_back(m);
                ys.push_back(std::log(B) / std::log(static_cast<double>(cfg.b)));
            }
        }
        res.slopes.push_back(fit_slope(xs, ys));
    }
    return res;
}

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg, const SweepResult& res) {
    char buf[128];
    os << "# iplr-sweep v1 b=" << cfg.b << "\n";
    for (std::size_t id = 0; id < cfg.items.size(); ++id)
        os << "# config " << id << ": " << cfg.items[id].label() << "\n";
    os << "config_id,m,N,B\n";
    for (const SweepRow& r : res.rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.0f,%.17g\n", r.config_id, r.m, r.N, r.B);
        os << buf;
    }
    for (std::size_t id = 0; id < res.slopes.size(); ++id) {
        std::snprintf(buf, sizeof buf, "# slope config %zu: %.6f\n", id, res.slopes[id]);
        os << buf;
    }
}

}  // namespace iplr
