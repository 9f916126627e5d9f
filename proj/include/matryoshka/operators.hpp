#pragma once

#include <vector>

#include "matryoshka/basis.hpp"
#include "matryoshka/lattice.hpp"
#include "matryoshka/sparse_operator.hpp"

namespace matryoshka {

// Pure color-exchange term between sites i and j: <x'|h|x> = 1 exactly when
// x' equals x with the two distinct colors at i, j swapped; zero diagonal.
SparseOperator bond_operator(int k, int i, int j, const SectorBasis& basis);

// Sum over bonds of coupling * bond_operator on the given basis.
SparseOperator hamiltonian(const std::vector<Bond>& bonds, const SectorBasis& basis);
SparseOperator hamiltonian(const SimplexLattice& lattice, const SectorBasis& basis);

// Single-simplex operators on k+1 sites: the sum of transpositions over all
// site pairs (identity on equal-color pairs), and the diagonal operator
// counting equal-color pairs. permutation_hamiltonian - delta_h equals the
// color-exchange Hamiltonian entrywise.
SparseOperator permutation_hamiltonian(int k, const SectorBasis& basis);
SparseOperator delta_h(int k, const SectorBasis& basis);

// Relabels colors on every site simultaneously: sigma[c] is the new color of
// c. Requires the full basis or a sigma-invariant sector.
SparseOperator color_permutation_operator(const std::vector<int>& sigma, const SectorBasis& basis);

Code permute_colors(Code code, const std::vector<int>& sigma, int n_sites, int k);

// Intra-layer bonds of a single (k+1)-site simplex at unit coupling.
std::vector<Bond> simplex_bonds(int k, double coupling = 1.0);

}  // namespace matryoshka
