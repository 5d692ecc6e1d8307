#include "iplr/field.hpp"

#include <stdexcept>

namespace iplr {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

PrimeBase::PrimeBase(int value) : b(value) {
    if (value < 2 || value >= (1 << 16) || !is_prime(static_cast<std::uint64_t>(value)))
        throw std::invalid_argument("base must be a prime below 2^16");
}

Poly::Poly(std::vector<int> c) : coeffs(std::move(c)) { normalize(); }

void Poly::normalize() {
    while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
}

static int mod_b(long long v, int b) {
    long long r = v % b;
    return static_cast<int>(r < 0 ? r + b : r);
}

Poly poly_add(const Poly& a, const Poly& c, const PrimeBase& b) {
    std::size_t n = std::max(a.coeffs.size(), c.coeffs.size());
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = mod_b(static_cast<long long>(a.coeff(static_cast<int>(i))) + c.coeff(static_cast<int>(i)), b.b);
    return Poly(std::move(out));
}

Poly poly_sub(const Poly& a, const Poly& c, const PrimeBase& b) {
    std::size_t n = std::max(a.coeffs.size(), c.coeffs.size());
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = mod_b(static_cast<long long>(a.coeff(static_cast<int>(i))) - c.coeff(static_cast<int>(i)), b.b);
    return Poly(std::move(out));
}

Poly poly_mul(const Poly& a, const Poly& c, const PrimeBase& b) {
    if (a.is_zero() || c.is_zero()) return {};
    std::vector<long long> acc(a.coeffs.size() + c.coeffs.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < c.coeffs.size(); ++j)
            acc[i + j] = (acc[i + j] + static_cast<long long>(a.coeffs[i]) * c.coeffs[j]) % b.b;
    std::vector<int> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<int>(acc[i]);
    return Poly(std::move(out));
}

static int inv_mod(int a, int b) {
    // b is prime: a^(b-2)
    long long r = 1, x = a % b;
    for (int e = b - 2; e > 0; e >>= 1) {
        if (e & 1) r = r * x % b;
        x = x * x % b;
    }
    return static_cast<int>(r);
}

Poly poly_mod(const Poly& a, const Poly& divisor, const PrimeBase& b) {
    if (divisor.is_zero()) throw std::invalid_argument("division by zero polynomial");
    std::vector<long long> r(a.coeffs.begin(), a.coeffs.end());
    int dd = divisor.degree();
    long long lead_inv = inv_mod(divisor.coeffs.back(), b.b);
    for (int i = static_cast<int>(r.size()) - 1; i >= dd; --i) {
        long long t = r[i] % b.b * lead_inv % b.b;
        if (t == 0) continue;
        for (int k = 0; k <= dd; ++k)
            r[i - dd + k] = mod_b(r[i - dd + k] - t * divisor.coeffs[k], b.b);
    }
    if (static_cast<int>(r.size()) > dd) r.resize(dd);
    std::vector<int> out(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) out[i] = static_cast<int>(r[i]);
    return Poly(std::move(out));
}

std::uint64_t ipow(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

std::uint64_t pack(const Poly& a, int b) {
    std::uint64_t v = 0;
    for (int i = a.degree(); i >= 0; --i) v = v * b + static_cast<std::uint64_t>(a.coeffs[i]);
    return v;
}

Poly unpack(std::uint64_t v, int b) {
    std::vector<int> c;
    while (v > 0) {
        c.push_back(static_cast<int>(v % b));
        v /= b;
    }
    return Poly(std::move(c));
}

std::uint64_t lex_key(std::uint64_t packed, int b, int m) {
    std::uint64_t key = 0;
    for (int i = 0; i < m; ++i) {
        key = key * b + packed % b;
        packed /= b;
    }
    return key;
}

static Poly from_lex_key(std::uint64_t key, int b, int m) {
    std::vector<int> c(m);
    for (int i = m - 1; i >= 0; --i) {
        c[i] = static_cast<int>(key % b);
        key /= b;
    }
    return Poly(std::move(c));
}

bool is_irreducible(const Poly& p, const PrimeBase& b) {
    int n = p.degree();
    if (n < 1) throw std::invalid_argument("irreducibility needs degree >= 1");
    // trial division by every monic polynomial of degree 1..n/2
    for (int k = 1; k <= n / 2; ++k) {
        std::uint64_t count = ipow(b.b, k);
        for (std::uint64_t low = 0; low < count; ++low) {
            Poly f = unpack(low, b.b);
            f.coeffs.resize(k + 1, 0);
            f.coeffs[k] = 1;
            if (poly_mod(p, f, b).is_zero()) return false;
        }
    }
    return true;
}

Poly find_irreducible(const PrimeBase& b, int m) {
    if (m < 1) throw std::invalid_argument("degree must be >= 1");
    std::uint64_t count = ipow(b.b, m);
    for (std::uint64_t key = 0; key < count; ++key) {
        Poly f = from_lex_key(key, b.b, m);
        f.coeffs.resize(m + 1, 0);
        f.coeffs[m] = 1;
        if (is_irreducible(f, b)) return f;
    }
    throw std::logic_error("no irreducible polynomial found");
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

static Poly powmod(Poly a, std::uint64_t e, const Poly& p, const PrimeBase& b) {
    Poly r({1});
    a = poly_mod(a, p, b);
    while (e > 0) {
        if (e & 1) r = poly_mod(poly_mul(r, a, b), p, b);
        a = poly_mod(poly_mul(a, a, b), p, b);
        e >>= 1;
    }
    return r;
}

std::uint64_t multiplicative_order(const Poly& a, const Poly& p, const PrimeBase& b) {
    std::uint64_t group = ipow(b.b, p.degree()) - 1;
    std::uint64_t ord = group;
    for (std::uint64_t q : prime_factors(group)) {
        while (ord % q == 0 && powmod(a, ord / q, p, b) == Poly({1})) ord /= q;
    }
    return ord;
}

Poly find_generator(const Poly& p, const PrimeBase& b) {
    int m = p.degree();
    std::uint64_t group = ipow(b.b, m) - 1;
    std::vector<std::uint64_t> factors = prime_factors(group);
    const Poly one({1});
    std::uint64_t count = ipow(b.b, m);
    for (std::uint64_t key = 1; key < count; ++key) {
        Poly a = from_lex_key(key, b.b, m);
        if (powmod(a, group, p, b) != one) continue;
        bool primitive = true;
        for (std::uint64_t q : factors) {
            if (powmod(a, group / q, p, b) == one) {
                primitive = false;
                break;
            }
        }
        if (primitive) return a;
    }
    throw std::logic_error("no primitive element found");
}

// Digitwise sum mod b of two packed m-digit residues.
static std::uint32_t padd(std::uint32_t a, std::uint32_t c, int b, int m) {
    if (b == 2) return a ^ c;
    std::uint32_t out = 0, scale = 1;
    for (int i = 0; i < m; ++i) {
        out += static_cast<std::uint32_t>((a % b + c % b) % b) * scale;
        a /= b;
        c /= b;
        scale *= b;
    }
    return out;
}

ModulusContext ModulusContext::make(int b, int m) {
    PrimeBase base(b);
    return make(b, find_irreducible(base, m));
}

ModulusContext ModulusContext::make(int b, const Poly& p) {
    ModulusContext ctx;
    ctx.base = PrimeBase(b);
    ctx.m = p.degree();
    if (ctx.m < 1) throw std::invalid_argument("modulus must have degree >= 1");
    if (p.coeffs.back() != 1) throw std::invalid_argument("modulus must be monic");
    if (!is_irreducible(p, ctx.base)) throw std::invalid_argument("modulus must be irreducible");
    ctx.size = ipow(b, ctx.m);
    if (ctx.size > (1ull << 24)) throw std::invalid_argument("b^m too large");
    ctx.order = ctx.size - 1;
    ctx.p = p;
    ctx.g = find_generator(p, ctx.base);

    ctx.pow_table.assign(ctx.order, 0);
    ctx.log_table.assign(ctx.size, 0);
    Poly cur({1});
    for (std::uint64_t z = 0; z < ctx.order; ++z) {
        auto r = static_cast<std::uint32_t>(pack(cur, b));
        ctx.pow_table[z] = r;
        ctx.log_table[r] = static_cast<std::uint32_t>(z);
        cur = poly_mod(poly_mul(cur, ctx.g, ctx.base), p, ctx.base);
    }

    // vtab is linear over Z_b: fill the monomials x^i by long division, then
    // extend additively.
    ctx.vtab.assign(ctx.size, 0);
    std::uint64_t bi = 1;
    for (int i = 0; i < ctx.m; ++i, bi *= b) {
        std::vector<Digit> t = v_m(unpack(bi, b), ctx, ctx.m);
        std::uint32_t v = 0;
        for (int l = 0; l < ctx.m; ++l) v = v * b + t[l];
        ctx.vtab[bi] = v;
    }
    for (std::uint64_t r = 1; r < ctx.size; ++r) {
        std::uint64_t low = 1;
        while ((r / low) % b == 0) low *= b;
        if (r == low) continue;
        ctx.vtab[r] = padd(ctx.vtab[r - low], ctx.vtab[low], b, ctx.m);
    }

    Poly xm;
    xm.coeffs.assign(ctx.m + 1, 0);
    xm.coeffs[ctx.m] = 1;
    ctx.xm_residue = static_cast<std::uint32_t>(pack(poly_mod(xm, p, ctx.base), b));
    return ctx;
}

std::uint32_t ModulusContext::mul(std::uint32_t r, std::uint32_t s) const {
    if (r == 0 || s == 0) return 0;
    std::uint64_t e = (static_cast<std::uint64_t>(log_table[r]) + log_table[s]) % order;
    return pow_table[e];
}

std::uint32_t ModulusContext::digit_block(std::uint32_t r, int k) const {
    if (r == 0) return 0;
    if (k == 0) return vtab[r];
    if (xm_residue == 0) return 0;
    std::uint64_t e = (static_cast<std::uint64_t>(log_table[r]) +
                       static_cast<std::uint64_t>(k) * log_table[xm_residue]) % order;
    return vtab[pow_table[e]];
}

Poly poly_mulmod(const Poly& a, const Poly& c, const ModulusContext& ctx) {
    return poly_mod(poly_mul(a, c, ctx.base), ctx.p, ctx.base);
}

std::vector<Digit> v_m(const Poly& numer, const ModulusContext& ctx, int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    const int b = ctx.b();
    const int m = ctx.m;
    Poly r = poly_mod(numer, ctx.p, ctx.base);
    std::vector<int> rem(m, 0);
    for (int i = 0; i <= r.degree(); ++i) rem[i] = r.coeffs[i];
    std::vector<Digit> t(depth);
    // rem has degree < m; each step multiplies by x and removes the x^m term.
    for (int l = 0; l < depth; ++l) {
        int top = rem[m - 1];
        t[l] = static_cast<Digit>(top);
        for (int i = m - 1; i >= 1; --i) rem[i] = mod_b(rem[i - 1] - static_cast<long long>(top) * ctx.p.coeffs[i], b);
        rem[0] = mod_b(-static_cast<long long>(top) * ctx.p.coeffs[0], b);
    }
    return t;
}

double digits_value(const std::vector<Digit>& t, int b) {
    double v = 0.0;
    for (auto it = t.rbegin(); it != t.rend(); ++it) v = (v + *it) / b;
    return v;
}

}  // namespace iplr
