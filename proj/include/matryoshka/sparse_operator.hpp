#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace matryoshka {

// Dense materialization is refused above this dimension.
inline constexpr std::size_t kDenseCap = 4096;

struct Triplet {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

// Real operator in coordinate form over a fixed basis. Triplets are sorted by
// (row, col), duplicate-free, with exact zeros dropped; row_ptr holds CSR-style
// offsets so rows can be scanned directly.
struct SparseOperator {
    std::size_t dim = 0;
    std::string basis_tag;
    std::vector<Triplet> triplets;
    std::vector<std::size_t> row_ptr;  // size dim + 1

    std::size_t nnz() const { return triplets.size(); }

    // y = A x. Rows may be split into contiguous partitions evaluated
    // concurrently; within a row the summation order is fixed (ascending
    // column), so the result is bitwise independent of the partition count.
    void mat_vec(const double* x, double* y, int partitions = 1) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& x, int partitions = 1) const;

    Eigen::MatrixXd to_dense() const;

    double symmetry_deviation() const;
    bool is_symmetric(double tol = 0.0) const { return symmetry_deviation() <= tol; }
};

// Sorts, merges duplicates, drops zeros, checks finiteness and index bounds.
SparseOperator make_operator(std::size_t dim, std::vector<Triplet> triplets, std::string basis_tag);

SparseOperator scale_operator(const SparseOperator& op, double factor);

// Coordinate-triplet text: header "dim nnz", then one "row col value" line per
// entry with 1-based indices and full-precision decimal values.
void write_triplets(const SparseOperator& op, std::ostream& os);

}  // namespace matryoshka
