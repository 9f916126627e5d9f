#include "matryoshka/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "matryoshka/errors.hpp"

namespace matryoshka {

Code pow_u64(std::uint64_t base, int exp) {
    Code p = 1;
    for (int i = 0; i < exp; ++i) p *= base;
    return p;
}

int color_at(Code code, int site, int k) {
    return static_cast<int>((code / pow_u64(k + 1, site - 1)) % (k + 1));
}

Code swap_site_colors(Code code, int site_i, int site_j, int k) {
    const Code pi = pow_u64(k + 1, site_i - 1);
    const Code pj = pow_u64(k + 1, site_j - 1);
    const std::int64_t ci = static_cast<std::int64_t>((code / pi) % (k + 1));
    const std::int64_t cj = static_cast<std::int64_t>((code / pj) % (k + 1));
    const std::int64_t shifted = static_cast<std::int64_t>(code) + (cj - ci) * static_cast<std::int64_t>(pi) +
                                 (ci - cj) * static_cast<std::int64_t>(pj);
    return static_cast<Code>(shifted);
}

std::vector<int> color_content(Code code, int n_sites, int k) {
    std::vector<int> counts(k + 1, 0);
    for (int s = 0; s < n_sites; ++s) {
        counts[code % (k + 1)]++;
        code /= (k + 1);
    }
    return counts;
}

std::uint64_t multinomial(int n, const std::vector<int>& parts) {
    std::uint64_t result = 1;
    int used = 0;
    for (int part : parts) {
        for (int i = 1; i <= part; ++i) {
            result = result * static_cast<std::uint64_t>(used + i) / static_cast<std::uint64_t>(i);
        }
        used += part;
    }
    if (used != n) throw ParameterError("multinomial: parts do not sum to n");
    return result;
}

std::size_t SectorBasis::dim() const {
    if (full) return static_cast<std::size_t>(pow_u64(k + 1, n_sites));
    return states.size();
}

Code SectorBasis::state(std::size_t index) const {
    if (full) return static_cast<Code>(index);
    return states[index];
}

std::size_t SectorBasis::index_of(Code code) const {
    if (full) {
        if (code >= dim()) throw ParameterError("index_of: code outside basis");
        return static_cast<std::size_t>(code);
    }
    auto it = std::lower_bound(states.begin(), states.end(), code);
    if (it == states.end() || *it != code) throw ParameterError("index_of: code outside sector");
    return static_cast<std::size_t>(it - states.begin());
}

bool SectorBasis::contains(Code code) const {
    if (full) return code < dim();
    return std::binary_search(states.begin(), states.end(), code);
}

bool SectorBasis::same_basis(const SectorBasis& other) const {
    return k == other.k && n_sites == other.n_sites && full == other.full && content == other.content;
}

std::string SectorBasis::tag() const {
    std::ostringstream os;
    os << "k=" << k << " sites=" << n_sites;
    if (full) {
        os << " full";
    } else {
        os << " content=";
        for (std::size_t i = 0; i < content.size(); ++i) os << (i ? "," : "") << content[i];
    }
    return os.str();
}

SectorBasis full_basis(int k, int n_sites) {
    if (k < 1 || n_sites < 1) throw ParameterError("full_basis: k and n_sites must be >= 1");
    // Guard memory: very large product spaces must go through sector bases.
    double states = std::pow(double(k + 1), n_sites);
    if (states > double(kFullBasisCap))
        throw ParameterError("full_basis: (k+1)^n_sites exceeds the full-basis cap; use a sector basis");
    SectorBasis b;
    b.k = k;
    b.n_sites = n_sites;
    b.full = true;
    return b;
}

SectorBasis enumerate_sector(int k, int n_sites, const std::vector<int>& content) {
    if (k < 1 || n_sites < 1) throw ParameterError("enumerate_sector: k and n_sites must be >= 1");
    if (static_cast<int>(content.size()) != k + 1)
        throw ParameterError("enumerate_sector: content must have k+1 entries");
    int sum = 0;
    for (int c : content) {
        if (c < 0) throw ParameterError("enumerate_sector: negative color count");
        sum += c;
    }
    if (sum != n_sites) throw ParameterError("enumerate_sector: content does not sum to n_sites");

    SectorBasis b;
    b.k = k;
    b.n_sites = n_sites;
    b.content = content;
    b.states.reserve(multinomial(n_sites, content));

    // Digits listed most-significant-site first, so lexicographic multiset
    // permutations come out in ascending code order.
    std::vector<int> digits;
    digits.reserve(n_sites);
    for (int c = 0; c <= k; ++c) digits.insert(digits.end(), content[c], c);

    do {
        Code code = 0;
        for (int d : digits) code = code * (k + 1) + static_cast<Code>(d);
        b.states.push_back(code);
    } while (std::next_permutation(digits.begin(), digits.end()));

    return b;
}

std::vector<std::vector<int>> all_contents(int k, int n_sites) {
    std::vector<std::vector<int>> result;
    std::vector<int> current(k + 1, 0);
    // Compositions of n_sites into k+1 parts, lexicographic.
    auto recurse = [&](auto&& self, int color, int remaining) -> void {
        if (color == k) {
            current[color] = remaining;
            result.push_back(current);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            current[color] = c;
            self(self, color + 1, remaining - c);
        }
    };
    recurse(recurse, 0, n_sites);
    return result;
}

}  // namespace matryoshka
