#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "iplr/cbc.hpp"

namespace iplr {

struct SweepItem {
    int alpha = 1;
    int d = 1;
    int s = 1;
    std::string weights = "fig";  // "fig": 4^{-max(d-alpha,0)} per coordinate; "one"; "decay": j^-2
    Weights make_weights() const;
    std::string label() const;
};

struct SweepConfig {
    int b = 2;
    int m_lo = 4;
    int m_hi = 14;
    Construction construction = Construction::Fast;
    std::vector<SweepItem> items;
    void validate() const;
};

struct SweepRow {
    int config_id = 0;
    int m = 0;
    double N = 0;
    double B = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<double> slopes;  // per config, NaN when fewer than two positive values
};

std::vector<SweepItem> sweep_preset(const std::string& name);
SweepResult run_sweep(const SweepConfig& cfg);
void write_sweep_csv(std::ostream& os, const SweepConfig& cfg, const SweepResult& res);

// Least-squares slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace iplr
