#pragma once

#include <cstdint>
#include <vector>

#include "iplr/field.hpp"
#include "iplr/lattice.hpp"

namespace iplr {

// Interlaces groups of d consecutive coordinates: output digit r + (a-1)d of
// x_j is digit a of z_{(j-1)d+r}. All inputs share one depth D; output depth d*D.
std::vector<std::vector<Digit>> interlace_point(const std::vector<std::vector<Digit>>& z, int d);
std::vector<std::vector<Digit>> deinterlace_point(const std::vector<std::vector<Digit>>& x, int d);
DigitMatrix interlace(const DigitMatrix& z, int d);

// E_d on d nonnegative integers.
std::uint64_t interlace_index(const std::vector<std::uint64_t>& k, int d, int b);

int mu(std::uint64_t k, int b);

struct RWeightOptions {
    bool divide_by_b_minus_1 = false;  // alternative r with an extra (b-1)^{-1} factor
};
double r_weight(std::uint64_t k, int alpha, int d, int b, RWeightOptions opt = {});
double r_weight(const std::vector<std::uint64_t>& k, int alpha, int d, int b, RWeightOptions opt = {});

}  // namespace iplr
