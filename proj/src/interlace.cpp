#include "iplr/interlace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace iplr {

std::vector<std::vector<Digit>> interlace_point(const std::vector<std::vector<Digit>>& z, int d) {
    if (d < 1) throw std::invalid_argument("interlacing factor must be >= 1");
    if (z.size() % d != 0) throw std::invalid_argument("coordinate count must be a multiple of d");
    std::size_t s = z.size() / d;
    std::size_t D = z.empty() ? 0 : z[0].size();
    for (const auto& c : z)
        if (c.size() != D) throw std::invalid_argument("all coordinates must share one depth");
    std::vector<std::vector<Digit>> x(s, std::vector<Digit>(D * d, 0));
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t a = 0; a < D; ++a)
            for (int r = 0; r < d; ++r) x[j][a * d + r] = z[j * d + r][a];
    return x;
}

std::vector<std::vector<Digit>> deinterlace_point(const std::vector<std::vector<Digit>>& x, int d) {
    if (d < 1) throw std::invalid_argument("interlacing factor must be >= 1");
    std::size_t L = x.empty() ? 0 : x[0].size();
    if (L % d != 0) throw std::invalid_argument("interlaced depth must be a multiple of d");
    std::size_t D = L / d;
    std::vector<std::vector<Digit>> z(x.size() * d, std::vector<Digit>(D, 0));
    for (std::size_t j = 0; j < x.size(); ++j)
        for (std::size_t a = 0; a < D; ++a)
            for (int r = 0; r < d; ++r) z[j * d + r][a] = x[j][a * d + r];
    return z;
}

DigitMatrix interlace(const DigitMatrix& z, int d) {
    if (d < 1) throw std::invalid_argument("interlacing factor must be >= 1");
    if (z.dim % d != 0) throw std::invalid_argument("dimension must be a multiple of d");
    int s = z.dim / d;
    DigitMatrix x(z.b, z.n_points, s, z.depth * d);
    for (std::size_t n = 0; n < z.n_points; ++n)
        for (int j = 0; j < s; ++j) {
            Digit* out = x.at(n, j);
            for (int r = 0; r < d; ++r) {
                const Digit* in = z.at(n, j * d + r);
                for (int a = 0; a < z.depth; ++a) out[a * d + r] = in[a];
            }
        }
    return x;
}

std::uint64_t interlace_index(const std::vector<std::uint64_t>& k, int d, int b) {
    if (static_cast<int>(k.size()) != d) throw std::invalid_argument("E_d takes exactly d integers");
    std::uint64_t out = 0;
    for (int r = 0; r < d; ++r) {
        std::uint64_t v = k[r];
        std::uint64_t scale = ipow(b, r);
        std::uint64_t step = ipow(b, d);
        while (v > 0) {
            out += (v % b) * scale;
            v /= b;
            scale *= step;
        }
    }
    return out;
}

int mu(std::uint64_t k, int b) {
    if (k == 0) throw std::invalid_argument("mu(0) is undefined");
    int a = 0;
    while (k > 0) {
        k /= b;
        ++a;
    }
    return a - 1;
}

double r_weight(std::uint64_t k, int alpha, int d, int b, RWeightOptions opt) {
    if (alpha < 1 || d < 1) throw std::invalid_argument("alpha and d must be >= 1");
    if (k == 0) return 1.0;
    int e = (2 * std::min(alpha, d) + 1) * mu(k, b);
    double r = std::pow(static_cast<double>(b), -e);
    if (opt.divide_by_b_minus_1) r /= (b - 1);
    return r;
}

double r_weight(const std::vector<std::uint64_t>& k, int alpha, int d, int b, RWeightOptions opt) {
    double r = 1.0;
    for (std::uint64_t kj : k) r *= r_weight(kj, alpha, d, b, opt);
    return r;
}

}  // namespace iplr
