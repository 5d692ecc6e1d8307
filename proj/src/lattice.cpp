#include "iplr/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "iplr/parallel.hpp"

namespace iplr {

double DigitMatrix::value(std::size_t n, int j) const {
    const Digit* t = at(n, j);
    double v = 0.0;
    for (int l = depth - 1; l >= 0; --l) v = (v + t[l]) / b;
    return v;
}

std::vector<double> DigitMatrix::point(std::size_t n) const {
    std::vector<double> x(dim);
    for (int j = 0; j < dim; ++j) x[j] = value(n, j);
    return x;
}

int default_depth(int b, int m) {
    int mant = static_cast<int>(std::ceil(52.0 / std::log2(static_cast<double>(b)) - 1e-12));
    return std::max(m, mant);
}

static std::vector<std::uint32_t> packed_q(const GeneratingVector& q, const ModulusContext& ctx) {
    std::vector<std::uint32_t> out;
    out.reserve(q.size());
    for (const Poly& qj : q) {
        if (qj.is_zero()) throw std::invalid_argument("generating polynomial must be nonzero");
        if (qj.degree() >= ctx.m) throw std::invalid_argument("generating polynomial degree must be < m");
        out.push_back(static_cast<std::uint32_t>(pack(qj, ctx.b())));
    }
    return out;
}

DigitMatrix generate_point_set(const GeneratingVector& q, const ModulusContext& ctx, int depth) {
    if (depth < 1) throw std::invalid_argument("depth must be >= 1");
    std::vector<std::uint32_t> qp = packed_q(q, ctx);
    const int b = ctx.b();
    const int m = ctx.m;
    const int dim = static_cast<int>(q.size());
    DigitMatrix out(b, ctx.size, dim, depth);
    parallel_chunks(ctx.size, 1024, [&](std::size_t lo, std::size_t hi, std::size_t) {
        for (std::size_t n = lo; n < hi; ++n) {
            for (int j = 0; j < dim; ++j) {
                std::uint32_t r = ctx.mul(static_cast<std::uint32_t>(n), qp[j]);
                Digit* t = out.at(n, j);
                for (int k = 0; k * m < depth; ++k) {
                    std::uint32_t blk = ctx.digit_block(r, k);
                    for (int l = m - 1; l >= 0; --l) {
                        int pos = k * m + l;
                        if (pos < depth) t[pos] = static_cast<Digit>(blk % b);
                        blk /= b;
                    }
                }
            }
        }
    });
    return out;
}

std::vector<std::uint32_t> lattice_indices(const GeneratingVector& q, const ModulusContext& ctx) {
    std::vector<std::uint32_t> qp = packed_q(q, ctx);
    std::vector<std::uint32_t> out(ctx.size * qp.size());
    for (std::size_t n = 0; n < ctx.size; ++n)
        for (std::size_t j = 0; j < qp.size(); ++j)
            out[n * qp.size() + j] = ctx.vtab[ctx.mul(static_cast<std::uint32_t>(n), qp[j])];
    return out;
}

Poly tr_m(std::uint64_t k, int m, const PrimeBase& b) {
    std::vector<int> c;
    for (int i = 0; i < m && k > 0; ++i) {
        c.push_back(static_cast<int>(k % b.b));
        k /= b.b;
    }
    return Poly(std::move(c));
}

bool dual_contains(const std::vector<std::uint64_t>& k, const GeneratingVector& q, const ModulusContext& ctx) {
    if (k.size() != q.size()) throw std::invalid_argument("k and q lengths differ");
    Poly acc;
    for (std::size_t j = 0; j < k.size(); ++j)
        acc = poly_add(acc, poly_mulmod(tr_m(k[j], ctx.m, ctx.base), q[j], ctx), ctx.base);
    return poly_mod(acc, ctx.p, ctx.base).is_zero();
}

std::complex<double> walsh(std::uint64_t k, const std::vector<Digit>& x, int b) {
    long long e = 0;
    std::size_t i = 0;
    while (k > 0) {
        if (i >= x.size()) throw std::invalid_argument("not enough digits for Walsh index");
        e += static_cast<long long>(k % b) * x[i];
        k /= b;
        ++i;
    }
    e %= b;
    if (e == 0) return {1.0, 0.0};
    double ang = 2.0 * std::numbers::pi * static_cast<double>(e) / b;
    return {std::cos(ang), std::sin(ang)};
}

std::complex<double> walsh_character_sum(const std::vector<std::uint64_t>& k, const DigitMatrix& pts) {
    if (static_cast<int>(k.size()) != pts.dim) throw std::invalid_argument("k length must equal dimension");
    std::complex<double> acc = 0.0;
    for (std::size_t n = 0; n < pts.n_points; ++n) {
        std::complex<double> w = 1.0;
        for (int j = 0; j < pts.dim; ++j) w *= walsh(k[j], pts.coord(n, j), pts.b);
        acc += w;
    }
    return acc / static_cast<double>(pts.n_points);
}

std::vector<Digit> digit_add(const std::vector<Digit>& x, const std::vector<Digit>& y, int b) {
    std::vector<Digit> out(std::max(x.size(), y.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int a = i < x.size() ? x[i] : 0;
        int c = i < y.size() ? y[i] : 0;
        out[i] = static_cast<Digit>((a + c) % b);
    }
    return out;
}

std::vector<Digit> digit_sub(const std::vector<Digit>& x, const std::vector<Digit>& y, int b) {
    std::vector<Digit> out(std::max(x.size(), y.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int a = i < x.size() ? x[i] : 0;
        int c = i < y.size() ? y[i] : 0;
        out[i] = static_cast<Digit>(((a - c) % b + b) % b);
    }
    return out;
}

void write_points_text(std::ostream& os, const DigitMatrix& pts) {
    char buf[40];
    for (std::size_t n = 0; n < pts.n_points; ++n) {
        for (int j = 0; j < pts.dim; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", pts.value(n, j));
            if (j) os << ' ';
            os << buf;
        }
        os << '\n';
    }
}

static void put_u64(std::ostream& os, std::uint64_t v) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    os.write(bytes, 8);
}

static std::uint64_t get_u64(std::istream& is) {
    unsigned char bytes[8];
    is.read(reinterpret_cast<char*>(bytes), 8);
    if (!is) throw std::runtime_error("truncated digit dump");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[i];
    return v;
}

void write_points_binary(std::ostream& os, const DigitMatrix& pts) {
    put_u64(os, static_cast<std::uint64_t>(pts.b));
    put_u64(os, pts.n_points);
    put_u64(os, static_cast<std::uint64_t>(pts.dim));
    put_u64(os, static_cast<std::uint64_t>(pts.depth));
    os.write(reinterpret_cast<const char*>(pts.digits.data()), static_cast<std::streamsize>(pts.digits.size()));
}

DigitMatrix read_points_binary(std::istream& is) {
    int b = static_cast<int>(get_u64(is));
    std::size_t n = get_u64(is);
    int dim = static_cast<int>(get_u64(is));
    int depth = static_cast<int>(get_u64(is));
    DigitMatrix out(b, n, dim, depth);
    is.read(reinterpret_cast<char*>(out.digits.data()), static_cast<std::streamsize>(out.digits.size()));
    if (!is) throw std::runtime_error("truncated digit dump");
    return out;
}

}  // namespace iplr
