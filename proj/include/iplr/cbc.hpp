#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "iplr/criterion.hpp"
#include "iplr/ddouble.hpp"
#include "iplr/field.hpp"
#include "iplr/lattice.hpp"

namespace iplr {

enum class Construction { Naive, Fast };

struct RuleSpec {
    int b = 2;
    int m = 1;
    int s = 1;
    int d = 1;
    int alpha = 1;
    Poly p;
    GeneratingVector q;  // length d*s
    Weights weights;
    double criterion_value = 0.0;
    Construction construction = Construction::Naive;

    SmoothnessParams params() const { return {alpha, d}; }
    ModulusContext context() const { return ModulusContext::make(b, p); }
};

struct CbcOptions {
    // Two candidate values tie when they differ by at most tie_rel times the smaller.
    double tie_rel = 1e-12;
};

struct CbcStep {
    int tau = 0;
    DD value;            // criterion of the chosen prefix
    double average = 0;  // mean criterion over all candidates at this step
    std::size_t exact_evaluations = 0;
};

struct CbcResult {
    RuleSpec rule;
    std::vector<CbcStep> steps;
};

CbcResult cbc_naive(int b, int m, int s, int d, int alpha, const Weights& w, const CbcOptions& opt = {});
CbcResult cbc_fast(int b, int m, int s, int d, int alpha, const Weights& w, const CbcOptions& opt = {});
CbcResult cbc_construct(Construction how, int b, int m, int s, int d, int alpha, const Weights& w,
                        const CbcOptions& opt = {});

// out[z] = sum_j a[j] c[(z - j) mod L].
std::vector<double> cyclic_convolution(const std::vector<double>& a, const std::vector<double>& c);
std::vector<double> cyclic_convolution_direct(const std::vector<double>& a, const std::vector<double>& c);

// P/Q vectors of the fast construction, indexed by the packed residue n.
struct CbcState {
    std::vector<DD> P;
    std::vector<DD> Q;
    int tau = 0;
    GeneratingVector chosen;
};

CbcState initial_state(const ModulusContext& ctx);
void update_state(CbcState& state, const Poly& q_new, const ModulusContext& ctx, const SmoothnessParams& sp,
                  const Weights& w);
// Criterion of the prefix held by the state (product weights).
DD state_value(const CbcState& state, const ModulusContext& ctx, const SmoothnessParams& sp, const Weights& w);

DD rule_criterion(const RuleSpec& rule);

std::string rule_to_json(const RuleSpec& rule);
RuleSpec rule_from_json(const std::string& text);
void save_rule(const RuleSpec& rule, const std::string& path);
RuleSpec load_rule(const std::string& path);

std::string weights_to_json(const Weights& w);
Weights weights_from_json(const std::string& text);

}  // namespace iplr
