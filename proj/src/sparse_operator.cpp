#include "matryoshka/sparse_operator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <thread>
#include <tuple>

#include "matryoshka/errors.hpp"

namespace matryoshka {

SparseOperator make_operator(std::size_t dim, std::vector<Triplet> triplets, std::string basis_tag) {
    for (const Triplet& t : triplets) {
        if (t.row >= dim || t.col >= dim) throw ParameterError("make_operator: index out of range");
        if (!std::isfinite(t.value)) throw NumericalError("make_operator: non-finite value");
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });

    SparseOperator op;
    op.dim = dim;
    op.basis_tag = std::move(basis_tag);
    op.triplets.reserve(triplets.size());
    for (const Triplet& t : triplets) {
        if (!op.triplets.empty() && op.triplets.back().row == t.row && op.triplets.back().col == t.col)
            op.triplets.back().value += t.value;
        else
            op.triplets.push_back(t);
    }
    op.triplets.erase(std::remove_if(op.triplets.begin(), op.triplets.end(),
                                     [](const Triplet& t) { return t.value == 0.0; }),
                      op.triplets.end());

    op.row_ptr.assign(dim + 1, 0);
    for (const Triplet& t : op.triplets) op.row_ptr[t.row + 1]++;
    for (std::size_t r = 0; r < dim; ++r) op.row_ptr[r + 1] += op.row_ptr[r];
    return op;
}

void SparseOperator::mat_vec(const double* x, double* y, int partitions) const {
    auto run_rows = [&](std::size_t r0, std::size_t r1) {
        for (std::size_t r = r0; r < r1; ++r) {
            double acc = 0.0;
            for (std::size_t t = row_ptr[r]; t < row_ptr[r + 1]; ++t)
                acc += triplets[t].value * x[triplets[t].col];
            y[r] = acc;
        }
    };
    if (partitions <= 1 || dim < 2) {
        run_rows(0, dim);
        return;
    }
    const std::size_t p = std::min<std::size_t>(partitions, dim);
    std::vector<std::thread> workers;
    workers.reserve(p);
    for (std::size_t i = 0; i < p; ++i) {
        const std::size_t r0 = dim * i / p;
        const std::size_t r1 = dim * (i + 1) / p;
        workers.emplace_back(run_rows, r0, r1);
    }
    for (auto& w : workers) w.join();
}

Eigen::VectorXd SparseOperator::apply(const Eigen::VectorXd& x, int partitions) const {
    if (static_cast<std::size_t>(x.size()) != dim)
        throw ParameterError("apply: dimension mismatch");
    Eigen::VectorXd y(dim);
    mat_vec(x.data(), y.data(), partitions);
    return y;
}

Eigen::MatrixXd SparseOperator::to_dense() const {
    if (dim > kDenseCap)
        throw ParameterError("to_dense: dimension exceeds the dense materialization cap");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
    for (const Triplet& t : triplets) m(t.row, t.col) += t.value;
    return m;
}

double SparseOperator::symmetry_deviation() const {
    double dev = 0.0;
    for (const Triplet& t : triplets) {
        // Locate the transposed entry via the row pointers.
        double mirror = 0.0;
        for (std::size_t u = row_ptr[t.col]; u < row_ptr[t.col + 1]; ++u) {
            if (triplets[u].col == t.row) {
                mirror = triplets[u].value;
                break;
            }
        }
        dev = std::max(dev, std::abs(t.value - mirror));
    }
    return dev;
}

SparseOperator scale_operator(const SparseOperator& op, double factor) {
    SparseOperator out = op;
    for (Triplet& t : out.triplets) t.value *= factor;
    if (factor == 0.0) return make_operator(op.dim, {}, op.basis_tag);
    return out;
}

void write_triplets(const SparseOperator& op, std::ostream& os) {
    os << op.dim << ' ' << op.nnz() << '\n';
    os << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const Triplet& t : op.triplets)
        os << (t.row + 1) << ' ' << (t.col + 1) << ' ' << t.value << '\n';
}

}  // namespace matryoshka
