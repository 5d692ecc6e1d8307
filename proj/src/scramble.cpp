#include "iplr/scramble.hpp"

#include <numeric>
#include <stdexcept>

#include "iplr/interlace.hpp"
#include "iplr/parallel.hpp"

namespace iplr {

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    return mix64(state);
}

ScrambleTree::ScrambleTree(int b, const ScrambleConfig& cfg) : b_(b), cfg_(cfg) {
    if (b < 2 || b > 256) throw std::invalid_argument("unsupported base for scrambling");
}

std::uint64_t ScrambleTree::root(int coord) const {
    std::uint64_t h = mix64(cfg_.seed ^ 0x243f6a8885a308d3ull);
    h = mix64(h ^ mix64(cfg_.replication_id + 0x13198a2e03707344ull));
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(coord) + 0xa4093822299f31d0ull));
    return h;
}

static std::uint64_t child(std::uint64_t h, int digit) {
    return mix64(h + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(digit + 1));
}

void ScrambleTree::fill_perm(std::uint64_t h, int* perm) const {
    if (cfg_.identity) {
        std::iota(perm, perm + b_, 0);
        return;
    }
    if (b_ == 2) {
        bool flip = (mix64(h ^ 0x082efa98ec4e6c89ull) >> 63) != 0;
        perm[0] = flip ? 1 : 0;
        perm[1] = flip ? 0 : 1;
        return;
    }
    std::iota(perm, perm + b_, 0);
    std::uint64_t st = h;
    for (int i = b_ - 1; i > 0; --i) {
        // unbiased draw in [0, i] by rejection
        std::uint64_t bound = static_cast<std::uint64_t>(i) + 1;
        std::uint64_t limit = ~0ull - (~0ull % bound);
        std::uint64_t v;
        do {
            v = splitmix64(st);
        } while (v >= limit);
        std::swap(perm[i], perm[static_cast<int>(v % bound)]);
    }
}

std::vector<int> ScrambleTree::permutation(int coord, const std::vector<Digit>& prefix) const {
    std::uint64_t h = root(coord);
    for (Digit x : prefix) h = child(h, x);
    std::vector<int> perm(b_);
    fill_perm(h, perm.data());
    return perm;
}

void ScrambleTree::apply(int coord, const Digit* in, int in_depth, Digit* out, int out_depth) const {
    std::uint64_t h = root(coord);
    int perm[256];
    for (int k = 0; k < out_depth; ++k) {
        int x = k < in_depth ? in[k] : 0;
        fill_perm(h, perm);
        out[k] = static_cast<Digit>(perm[x]);
        h = child(h, x);
    }
}

DigitMatrix scramble_set(const DigitMatrix& points, const ScrambleConfig& cfg) {
    int depth = cfg.depth > 0 ? cfg.depth : points.depth;
    ScrambleTree tree(points.b, cfg);
    DigitMatrix out(points.b, points.n_points, points.dim, depth);
    parallel_chunks(points.n_points, 256, [&](std::size_t lo, std::size_t hi, std::size_t) {
        for (std::size_t n = lo; n < hi; ++n)
            for (int j = 0; j < points.dim; ++j) tree.apply(j, points.at(n, j), points.depth, out.at(n, j), depth);
    });
    return out;
}

DigitMatrix order_d_scramble(const DigitMatrix& points, int d, const ScrambleConfig& cfg) {
    if (d < 1 || points.dim % d != 0) throw std::invalid_argument("dimension must be a multiple of d");
    return interlace(scramble_set(points, cfg), d);
}

}  // namespace iplr
