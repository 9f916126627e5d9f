#include "matryoshka/operators.hpp"

#include <algorithm>

#include "matryoshka/errors.hpp"

namespace matryoshka {

SparseOperator bond_operator(int k, int i, int j, const SectorBasis& basis) {
    if (i == j) throw ParameterError("bond_operator: i and j must differ");
    if (i < 1 || j < 1 || i > basis.n_sites || j > basis.n_sites)
        throw ParameterError("bond_operator: site outside basis range");

    std::vector<Triplet> triplets;
    const std::size_t dim = basis.dim();
    for (std::size_t idx = 0; idx < dim; ++idx) {
        const Code x = basis.state(idx);
        if (color_at(x, i, k) == color_at(x, j, k)) continue;
        const Code swapped = swap_site_colors(x, i, j, k);
        triplets.push_back({basis.index_of(swapped), idx, 1.0});
    }
    return make_operator(dim, std::move(triplets), basis.tag());
}

SparseOperator hamiltonian(const std::vector<Bond>& bonds, const SectorBasis& basis) {
    const int k = basis.k;
    std::vector<Triplet> triplets;
    const std::size_t dim = basis.dim();
    for (const Bond& b : bonds) {
        if (b.i == b.j) throw ParameterError("hamiltonian: bond with equal endpoints");
        if (b.i < 1 || b.j < 1 || b.i > basis.n_sites || b.j > basis.n_sites)
            throw ParameterError("hamiltonian: bond endpoint outside basis range");
        for (std::size_t idx = 0; idx < dim; ++idx) {
            const Code x = basis.state(idx);
            if (color_at(x, b.i, k) == color_at(x, b.j, k)) continue;
            const Code swapped = swap_site_colors(x, b.i, b.j, k);
            triplets.push_back({basis.index_of(swapped), idx, b.coupling});
        }
    }
    return make_operator(dim, std::move(triplets), basis.tag());
}

SparseOperator hamiltonian(const SimplexLattice& lattice, const SectorBasis& basis) {
    if (lattice.n_sites() != basis.n_sites)
        throw ParameterError("hamiltonian: lattice and basis site counts differ");
    if (lattice.k != basis.k) throw ParameterError("hamiltonian: lattice and basis k differ");
    return hamiltonian(lattice.bonds, basis);
}

SparseOperator permutation_hamiltonian(int k, const SectorBasis& basis) {
    if (basis.n_sites != k + 1)
        throw ParameterError("permutation_hamiltonian: basis must have k+1 sites");
    std::vector<Triplet> triplets;
    const std::size_t dim = basis.dim();
    for (std::size_t idx = 0; idx < dim; ++idx) {
        const Code x = basis.state(idx);
        for (int i = 1; i <= k + 1; ++i) {
            for (int j = i + 1; j <= k + 1; ++j) {
                if (color_at(x, i, k) == color_at(x, j, k)) {
                    triplets.push_back({idx, idx, 1.0});
                } else {
                    triplets.push_back({basis.index_of(swap_site_colors(x, i, j, k)), idx, 1.0});
                }
            }
        }
    }
    return make_operator(dim, std::move(triplets), basis.tag());
}

SparseOperator delta_h(int k, const SectorBasis& basis) {
    if (basis.n_sites != k + 1) throw ParameterError("delta_h: basis must have k+1 sites");
    std::vector<Triplet> triplets;
    const std::size_t dim = basis.dim();
    for (std::size_t idx = 0; idx < dim; ++idx) {
        const auto counts = color_content(basis.state(idx), k + 1, k);
        double pairs = 0.0;
        for (int n : counts) pairs += 0.5 * n * (n - 1);
        if (pairs != 0.0) triplets.push_back({idx, idx, pairs});
    }
    return make_operator(dim, std::move(triplets), basis.tag());
}

Code permute_colors(Code code, const std::vector<int>& sigma, int n_sites, int k) {
    Code result = 0;
    Code weight = 1;
    for (int s = 0; s < n_sites; ++s) {
        result += static_cast<Code>(sigma[code % (k + 1)]) * weight;
        code /= (k + 1);
        weight *= (k + 1);
    }
    return result;
}

SparseOperator color_permutation_operator(const std::vector<int>& sigma, const SectorBasis& basis) {
    const int k = basis.k;
    if (static_cast<int>(sigma.size()) != k + 1)
        throw ParameterError("color_permutation_operator: sigma must have k+1 entries");
    std::vector<char> seen(k + 1, 0);
    for (int c : sigma) {
        if (c < 0 || c > k || seen[c]) throw ParameterError("color_permutation_operator: sigma is not a bijection");
        seen[c] = 1;
    }
    if (!basis.full) {
        // A sector basis only closes under sigma when the permuted content
        // coincides with the original.
        std::vector<int> permuted(k + 1, 0);
        for (int c = 0; c <= k; ++c) permuted[sigma[c]] = basis.content[c];
        if (permuted != basis.content)
            throw ParameterError("color_permutation_operator: sigma maps the sector to a different "
                                 "content; use the full basis");
    }

    std::vector<Triplet> triplets;
    const std::size_t dim = basis.dim();
    triplets.reserve(dim);
    for (std::size_t idx = 0; idx < dim; ++idx) {
        const Code image = permute_colors(basis.state(idx), sigma, basis.n_sites, k);
        triplets.push_back({basis.index_of(image), idx, 1.0});
    }
    return make_operator(dim, std::move(triplets), basis.tag());
}

std::vector<Bond> simplex_bonds(int k, double coupling) {
    std::vector<Bond> bonds;
    for (int i = 1; i <= k + 1; ++i)
        for (int j = i + 1; j <= k + 1; ++j) bonds.push_back({i, j, coupling});
    return bonds;
}

}  // namespace matryoshka
