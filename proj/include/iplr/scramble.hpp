#pragma once

#include <cstdint>
#include <vector>

#include "iplr/lattice.hpp"

namespace iplr {

struct ScrambleConfig {
    std::uint64_t seed = 0;
    int depth = 0;  // 0: use the depth of the input points
    std::uint64_t replication_id = 0;
    bool identity = false;  // test hook: every permutation is the identity
};

// Nested (Owen) scrambling tree for one replication. The permutation at the node
// reached by a digit prefix is derived from a SplitMix64 hash chain over
// (seed, replication_id, coordinate, prefix), so nodes are materialized on
// demand without shared mutable state and the same prefix always yields the
// same permutation.
class ScrambleTree {
public:
    ScrambleTree(int b, const ScrambleConfig& cfg);

    // Permutation applied to digit k+1 given the first k digits of the input.
    std::vector<int> permutation(int coord, const std::vector<Digit>& prefix) const;
    void apply(int coord, const Digit* in, int in_depth, Digit* out, int out_depth) const;

private:
    std::uint64_t root(int coord) const;
    void fill_perm(std::uint64_t h, int* perm) const;

    int b_;
    ScrambleConfig cfg_;
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix64(std::uint64_t x);

DigitMatrix scramble_set(const DigitMatrix& points, const ScrambleConfig& cfg);
DigitMatrix order_d_scramble(const DigitMatrix& points, int d, const ScrambleConfig& cfg);

}  // namespace iplr
