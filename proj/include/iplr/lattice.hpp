#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "iplr/field.hpp"

namespace iplr {

struct DigitMatrix {
    int b = 2;
    std::size_t n_points = 0;
    int dim = 0;
    int depth = 0;
    std::vector<Digit> digits;  // [n][j][l], row-major

    DigitMatrix() = default;
    DigitMatrix(int base, std::size_t n, int d, int D)
        : b(base), n_points(n), dim(d), depth(D), digits(n * static_cast<std::size_t>(d) * D, 0) {}

    Digit* at(std::size_t n, int j) { return digits.data() + (n * dim + j) * depth; }
    const Digit* at(std::size_t n, int j) const { return digits.data() + (n * dim + j) * depth; }
    std::vector<Digit> coord(std::size_t n, int j) const { return {at(n, j), at(n, j) + depth}; }
    double value(std::size_t n, int j) const;
    std::vector<double> point(std::size_t n) const;
    bool operator==(const DigitMatrix& o) const {
        return b == o.b && n_points == o.n_points && dim == o.dim && depth == o.depth && digits == o.digits;
    }
};

using GeneratingVector = std::vector<Poly>;

int default_depth(int b, int m);

DigitMatrix generate_point_set(const GeneratingVector& q, const ModulusContext& ctx, int depth);

// First m digits of v(n q_j / p) as integers in [0, b^m), one column per q_j.
std::vector<std::uint32_t> lattice_indices(const GeneratingVector& q, const ModulusContext& ctx);

Poly tr_m(std::uint64_t k, int m, const PrimeBase& b);
bool dual_contains(const std::vector<std::uint64_t>& k, const GeneratingVector& q, const ModulusContext& ctx);

std::complex<double> walsh(std::uint64_t k, const std::vector<Digit>& x, int b);
std::complex<double> walsh_character_sum(const std::vector<std::uint64_t>& k, const DigitMatrix& pts);

// Digitwise x (+) y and x (-) y mod b.
std::vector<Digit> digit_add(const std::vector<Digit>& x, const std::vector<Digit>& y, int b);
std::vector<Digit> digit_sub(const std::vector<Digit>& x, const std::vector<Digit>& y, int b);

// One point per line, coordinates with 17 significant digits.
void write_points_text(std::ostream& os, const DigitMatrix& pts);
// Header (b, n_points, dim, depth) as little-endian uint64, then the digit bytes.
void write_points_binary(std::ostream& os, const DigitMatrix& pts);
DigitMatrix read_points_binary(std::istream& is);

}  // namespace iplr
