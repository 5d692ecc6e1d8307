#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "iplr/cbc.hpp"
#include "iplr/lattice.hpp"
#include "iplr/scramble.hpp"

namespace iplr {

struct Integrand {
    int dim = 1;
    std::function<double(const std::vector<double>&)> evaluate;
    std::optional<double> exact_integral;
    std::string description;
};

struct IntegrandOptions {
    double c = 0.0;                // product_quadratic offset
    int power = 3;                 // product_smooth exponent k
    std::vector<double> gamma;     // product_smooth weights (default all 1)
    std::vector<double> frequency; // oscillatory coefficients (default all 1)
    double phase = 0.25;           // oscillatory shift u in cos(2 pi u + a.x)
};

// kind: constant, product_quadratic, product_smooth, oscillatory
Integrand builtin_integrand(int s, const std::string& kind, const IntegrandOptions& opt = {});
std::vector<std::string> builtin_integrand_kinds();

struct RqmcResult {
    std::vector<double> estimates;
    double mean = 0.0;
    double sample_variance = 0.0;
    int replications = 0;
    std::uint64_t seed = 0;
    double stderr_() const;
};

// Unscrambled ds-dimensional lattice points of the rule at the given depth (0: default).
DigitMatrix rule_points(const RuleSpec& rule, int depth = 0);

double average_over(const Integrand& f, const DigitMatrix& pts);
double integrate_once(const Integrand& f, const RuleSpec& rule, const ScrambleConfig& cfg);
double integrate_once(const Integrand& f, const DigitMatrix& lattice, int d, const ScrambleConfig& cfg);
RqmcResult rqmc_estimate(const Integrand& f, const RuleSpec& rule, int R, std::uint64_t seed, int depth = 0);

}  // namespace iplr
