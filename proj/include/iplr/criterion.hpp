#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "iplr/ddouble.hpp"
#include "iplr/field.hpp"
#include "iplr/lattice.hpp"

namespace iplr {

// Subsets of {1..s} are bitmasks: bit j-1 stands for coordinate j.
using Subset = std::uint32_t;
constexpr int kMaxGeneralDim = 20;

struct Weights {
    enum class Kind { Product, General };
    Kind kind = Kind::Product;
    int s = 0;
    std::vector<double> product;      // gamma_j, j = 1..s
    std::map<Subset, double> general;  // missing subsets have weight 0

    static Weights make_product(std::vector<double> gamma);
    static Weights make_general(int s, std::map<Subset, double> gamma);
    // General weights equal to the product weights gamma_u = prod gamma_j.
    static Weights product_as_general(const std::vector<double>& gamma);

    bool is_product() const { return kind == Kind::Product; }
    double gamma(Subset u) const;
    Weights restricted(int s_new) const;
    void validate() const;
};

struct SmoothnessParams {
    int alpha = 1;
    int d = 1;
    int amin() const { return alpha < d ? alpha : d; }
    // 4^{max(d-alpha,0)}
    double c_factor() const;
    void validate() const;
};

// phi_{alpha,d} on a digit vector; floor(log_b z) is taken as minus the index
// of the first nonzero digit.
double phi(const std::vector<Digit>& z, int alpha, int d, int b);
DD phi_dd(int first_nonzero, int alpha, int d, int b);  // first_nonzero = 0 means z = 0

// 1 + phi(k / b^m) for every k in [0, b^m).
std::vector<DD> one_plus_phi_table(int b, int m, const SmoothnessParams& sp);

DD criterion_product_dd(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                        const Weights& w);
DD criterion_general_dd(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                        const Weights& w);
// Criterion of the first tau = q.size() components; dispatches on the weight kind.
DD criterion_partial_dd(const GeneratingVector& q_tau, const ModulusContext& ctx, const SmoothnessParams& sp,
                        const Weights& w);
// Same, with general weights evaluated through the subset expansion.
DD criterion_partial_general_dd(const GeneratingVector& q_tau, const ModulusContext& ctx,
                                const SmoothnessParams& sp, const Weights& w);

double criterion_product(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                         const Weights& w);
double criterion_general(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                         const Weights& w);
double criterion_partial(const GeneratingVector& q_tau, const ModulusContext& ctx, const SmoothnessParams& sp,
                         const Weights& w);

// Dual-lattice sum with every index below b^K. Dual membership only depends on
// the low m digits, so indices are grouped by their low part and the high
// digits are summed per coordinate.
double criterion_bruteforce(const GeneratingVector& q, const ModulusContext& ctx, const SmoothnessParams& sp,
                            const Weights& w, int K);

// tau=1 value for q_1 = 1.
double criterion_tau1_closed_form(int b, int m, const SmoothnessParams& sp, double gamma1);

}  // namespace iplr
