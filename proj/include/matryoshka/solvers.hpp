#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "matryoshka/sparse_operator.hpp"

namespace matryoshka {

struct DenseSpectrum {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // orthonormal columns
};

DenseSpectrum dense_spectrum(const SparseOperator& op);

struct LanczosOptions {
    int max_iterations = 300;
    double tolerance = 1e-10;  // residual ||H v - E v||
    std::uint64_t seed = 1;
};

struct LanczosResult {
    Eigen::VectorXd eigenvalues;   // two lowest Ritz values
    Eigen::VectorXd ground_vector;
    double residual = 0.0;
    int iterations = 0;
};

// Lanczos with full reorthogonalization; deterministic for a fixed seed.
LanczosResult lanczos_lowest(const SparseOperator& op, const LanczosOptions& options = {});

struct GroundSpace {
    double energy = 0.0;
    Eigen::MatrixXd vectors;  // orthonormal columns spanning the ground subspace
    double gap = 0.0;         // distance to the first excluded eigenvalue
};

// Ground eigenspace by dense diagonalization: all eigenvectors within tol of
// the minimum. Throws when the degeneracy exceeds the cap.
GroundSpace ground_projector(const SparseOperator& h0, double tol = 1e-9, int degeneracy_cap = 64);

}  // namespace matryoshka
