#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "matryoshka/basis.hpp"
#include "matryoshka/lattice.hpp"
#include "matryoshka/sparse_operator.hpp"

namespace matryoshka {

struct StateVector {
    SectorBasis basis;
    Eigen::VectorXd amplitudes;

    double norm_deviation() const;  // |1 - sum a^2|
};

// Tensor product over layers of the (k+1)-site antisymmetrizer, normalized by
// 1/sqrt((k+1)!) per layer. Sign convention: + for ascending colors on
// ascending site ids within a layer. Lives in the balanced sector unless the
// full basis is requested.
StateVector analytic_ground_state(int k, int layers, bool on_full_basis = false);

enum class SolverKind { Auto, Dense, Iterative };

struct GroundStateOptions {
    SolverKind solver = SolverKind::Auto;
    double tolerance = 1e-10;
    std::uint64_t seed = 1;
    double degeneracy_tol = 1e-8;
};

struct ExactGroundState {
    double energy = 0.0;
    StateVector state;
    double residual = 0.0;
    bool degenerate = false;
    double second_energy = 0.0;
};

ExactGroundState exact_ground_state(const SparseOperator& h, const SectorBasis& basis,
                                    const GroundStateOptions& options = {});

// Lowest eigenpair of the lattice Hamiltonian on the given content sector
// (balanced content when empty).
ExactGroundState exact_ground_state(const SimplexLattice& lattice, std::vector<int> content = {},
                                    const GroundStateOptions& options = {});

// Bipartition descriptor resolving to the site set of subsystem A.
struct Cut {
    enum class Kind { Radial, Concentric, Explicit, EvenOdd };
    Kind kind = Kind::Explicit;
    std::vector<int> m_per_layer;  // Radial: sites with local index 1..m_n per layer
    int boundary_layer = 0;        // Concentric: layers 1..boundary_layer
    std::vector<int> sites;        // Explicit

    static Cut radial(std::vector<int> m);
    static Cut concentric(int boundary_layer);
    static Cut explicit_sites(std::vector<int> sites);
    static Cut even_odd();  // one site per layer, local index 2

    std::vector<int> resolve(int k, int layers) const;
    std::string descriptor() const;
};

struct SchmidtResult {
    std::vector<double> schmidt_values;  // descending
    double entropy = 0.0;                // natural log
    double normalization_deviation = 0.0;
};

// Singular values of the subsystem-vs-complement amplitude matrix; only
// occupied rows and columns are materialized.
SchmidtResult schmidt(const StateVector& state, const std::vector<int>& subsystem_sites);

// Closed-form entropy of the analytic state for per-layer cuts of m sites:
// sum_n ln C(k+1, m_n).
double radial_entropy(int k, int layers, const std::vector<int>& m_per_layer);

double fidelity(const StateVector& a, const StateVector& b);

struct SingletIdentityReport {
    double overcompleteness_residual = 0.0;
    double arrow_reversal_residual = 0.0;
    double action_identity_residual = 0.0;
};

// Exact identities of the overcomplete singlet basis: (i) two-bond
// overcompleteness on three sites, (ii) arrow reversal as a global sign flip,
// (iii) the facet-bond action on a simplex singlet with an attached external
// site. k = 2 or 3.
SingletIdentityReport singlet_identities(int k);

}  // namespace matryoshka
