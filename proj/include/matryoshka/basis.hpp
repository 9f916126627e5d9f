#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace matryoshka {

// A color configuration is a base-(k+1) integer; site s holds the digit of
// weight (k+1)^(s-1), i.e. site 1 is the least significant digit.
using Code = std::uint64_t;

// Full product bases are refused above this many states.
inline constexpr std::uint64_t kFullBasisCap = std::uint64_t(1) << 24;

Code pow_u64(std::uint64_t base, int exp);

int color_at(Code code, int site, int k);
Code swap_site_colors(Code code, int site_i, int site_j, int k);
std::vector<int> color_content(Code code, int n_sites, int k);

std::uint64_t multinomial(int n, const std::vector<int>& parts);

// Ordered basis of color configurations on n_sites sites: either the full
// product space or the fixed-color-content subspace, ascending by code.
struct SectorBasis {
    int k = 0;
    int n_sites = 0;
    bool full = false;
    std::vector<int> content;   // size k+1 when !full
    std::vector<Code> states;   // empty when full (index == code)

    std::size_t dim() const;
    Code state(std::size_t index) const;
    std::size_t index_of(Code code) const;  // throws ParameterError if absent
    bool contains(Code code) const;
    bool same_basis(const SectorBasis& other) const;
    std::string tag() const;
};

SectorBasis full_basis(int k, int n_sites);
SectorBasis enumerate_sector(int k, int n_sites, const std::vector<int>& content);

// Every composition of n_sites into k+1 nonnegative parts.
std::vector<std::vector<int>> all_contents(int k, int n_sites);

}  // namespace matryoshka
