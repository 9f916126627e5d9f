#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "matryoshka/basis.hpp"
#include "matryoshka/lattice.hpp"
#include "matryoshka/solvers.hpp"
#include "matryoshka/sparse_operator.hpp"

namespace matryoshka {

struct SparseVec {
    std::vector<std::pair<std::size_t, double>> entries;  // sorted by index
};

// Orthonormal ground-subspace basis of H0, columns in the operator's basis.
struct GroundBasis {
    double energy = 0.0;
    std::vector<SparseVec> columns;
};

struct EffectiveHamiltonian {
    std::size_t inner_dim = 0;  // retained-basis size
    Eigen::MatrixXd matrix;     // on the ground-subspace basis
    int k = 0;
    int layer = 0;
    double coupling = 0.0;      // J multiplying V
    double ground_energy = 0.0; // E0 of H0
    double gap = 0.0;           // smallest excitation energy entering the resolvent
};

// Second-order effective Hamiltonian on the ground subspace of H0:
//   P0 H0 P0 + J P0 V P0 + J^2 sum_k P0 V Pi_k V P0 / (E0 - E_k),
// with the resolvent built from dense eigendecompositions of H0 restricted to
// the invariant blocks reachable from the ground subspace by one application
// of V. Degenerate excited levels are clustered and share one denominator.
EffectiveHamiltonian schrieffer_wolff_2nd(const SparseOperator& h0, const SparseOperator& v,
                                          double j, const GroundBasis& ground);

// Convenience overload computing the ground basis numerically (dense path).
EffectiveHamiltonian schrieffer_wolff_2nd(const SparseOperator& h0, const SparseOperator& v,
                                          double j, double ground_tol = 1e-9,
                                          int degeneracy_cap = kDenseCap);

// Two-layer block with the inner simplex at coupling j_inner, the inter-layer
// bonds at unit coupling, and the ground basis (inner singlet) x (outer
// configurations) on the tensor-product basis.
struct TwoLayerBlock {
    SectorBasis basis;   // full basis on 2(k+1) sites
    SparseOperator h0;
    SparseOperator v;
    GroundBasis ground;
};

TwoLayerBlock two_layer_block(int k, double j_inner);

struct RGStepReport {
    int layer = 0;
    double j_inner = 0.0;                // intra-layer coupling entering the step
    double j_link = 0.0;                 // inter-layer coupling J_n
    double renormalized_coupling = 0.0;  // J-tilde, measured from H_eff
    double constant_shift = 0.0;         // per outer-layer identity
    double deviation = 0.0;              // max |H_eff - (E0 + shift + J-tilde * sum h)|
    double dasgupta_ma = 0.0;            // rule-of-thumb J_link^2/((k+1)! J_inner), for comparison
    double gap = 0.0;
    double ground_energy = 0.0;
    std::vector<std::string> warnings;
};

RGStepReport rg_step_core(int k, double j_inner, double j_link, int layer_index);

// Step n of the layer-by-layer flow (layers below n already frozen into their
// singlets, with the chained renormalized coupling feeding the step).
RGStepReport rg_step(const SimplexLattice& lattice, int layer);

std::vector<RGStepReport> effective_flow(const SimplexLattice& lattice);

}  // namespace matryoshka
