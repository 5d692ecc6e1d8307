#pragma once

#include <cstdint>
#include <vector>

namespace iplr {

using Digit = std::uint8_t;

// Prime base of the field Z_b.
struct PrimeBase {
    int b = 2;
    PrimeBase() = default;
    explicit PrimeBase(int value);  // throws std::invalid_argument unless prime and < 2^16
};

bool is_prime(std::uint64_t n);

// Dense polynomial over Z_b; coeffs[i] is the coefficient of x^i.
// The zero polynomial is the empty vector.
struct Poly {
    std::vector<int> coeffs;

    Poly() = default;
    explicit Poly(std::vector<int> c);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool is_zero() const { return coeffs.empty(); }
    int coeff(int i) const { return i < static_cast<int>(coeffs.size()) ? coeffs[i] : 0; }
    void normalize();
    bool operator==(const Poly& o) const { return coeffs == o.coeffs; }
};

Poly poly_add(const Poly& a, const Poly& c, const PrimeBase& b);
Poly poly_sub(const Poly& a, const Poly& c, const PrimeBase& b);
Poly poly_mul(const Poly& a, const Poly& c, const PrimeBase& b);
// Remainder of a modulo a monic or non-monic divisor.
Poly poly_mod(const Poly& a, const Poly& divisor, const PrimeBase& b);

// Base-b positional packing, coefficient i -> digit i. Residues of degree < m
// map to [0, b^m).
std::uint64_t pack(const Poly& a, int b);
Poly unpack(std::uint64_t v, int b);

// Rank in the lexicographic order of coefficient vectors of length m read from
// the constant term upward.
std::uint64_t lex_key(std::uint64_t packed, int b, int m);

std::uint64_t ipow(std::uint64_t base, int e);

bool is_irreducible(const Poly& p, const PrimeBase& b);
Poly find_irreducible(const PrimeBase& b, int m);

struct ModulusContext {
    PrimeBase base;
    int m = 0;
    Poly p;
    Poly g;
    std::uint64_t size = 0;   // b^m
    std::uint64_t order = 0;  // b^m - 1
    std::vector<std::uint32_t> pow_table;  // exponent -> packed residue
    std::vector<std::uint32_t> log_table;  // packed residue -> exponent (entry 0 unused)
    std::vector<std::uint32_t> vtab;       // packed residue r -> first m digits of r/p as integer
    std::uint32_t xm_residue = 0;          // x^m mod p, packed

    // Builds the context with p = find_irreducible(b, m).
    static ModulusContext make(int b, int m);
    static ModulusContext make(int b, const Poly& p);

    int b() const { return base.b; }
    std::uint32_t mul(std::uint32_t r, std::uint32_t s) const;
    // Digits km+1..(k+1)m of r/p, as an integer, for block k >= 0.
    std::uint32_t digit_block(std::uint32_t r, int k) const;
};

Poly poly_mulmod(const Poly& a, const Poly& c, const ModulusContext& ctx);
Poly find_generator(const Poly& p, const PrimeBase& b);
std::uint64_t multiplicative_order(const Poly& a, const Poly& p, const PrimeBase& b);

// First `depth` digits t_1..t_depth of the Laurent expansion of numer/p.
std::vector<Digit> v_m(const Poly& numer, const ModulusContext& ctx, int depth);
double digits_value(const std::vector<Digit>& t, int b);

std::vector<std::uint64_t> prime_factors(std::uint64_t n);

}  // namespace iplr
