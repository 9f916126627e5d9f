#include "matryoshka/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "matryoshka/errors.hpp"

namespace matryoshka {

DenseSpectrum dense_spectrum(const SparseOperator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.to_dense());
    if (solver.info() != Eigen::Success) throw NumericalError("dense_spectrum: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

LanczosResult lanczos_lowest(const SparseOperator& op, const LanczosOptions& options) {
    const Eigen::Index n = static_cast<Eigen::Index>(op.dim);
    if (n < 1) throw ParameterError("lanczos_lowest: empty operator");

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    auto random_vector = [&] {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(rng);
        return v;
    };

    const int m_max = std::min<int>(options.max_iterations, static_cast<int>(n));
    std::vector<Eigen::VectorXd> basis;
    basis.reserve(m_max);
    std::vector<double> alpha, beta;  // beta[j] links vectors j and j+1

    auto orthogonalize = [&](Eigen::VectorXd& w) {
        // Two Gram-Schmidt sweeps keep the basis orthonormal to round-off.
        for (int sweep = 0; sweep < 2; ++sweep)
            for (const auto& b : basis) w -= b.dot(w) * b;
    };

    Eigen::VectorXd v = random_vector();
    v.normalize();
    basis.push_back(v);

    Eigen::MatrixXd ritz_vectors;
    Eigen::VectorXd ritz_values;
    int iterations = 0;

    for (int j = 0; j < m_max; ++j) {
        iterations = j + 1;
        Eigen::VectorXd w = op.apply(basis[j]);
        const double a = basis[j].dot(w);
        alpha.push_back(a);
        orthogonalize(w);
        const double b = w.norm();

        // Tridiagonal Ritz problem.
        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
        ritz_values = small.eigenvalues();
        ritz_vectors = small.eigenvectors();

        const double scale = std::max(1.0, std::abs(ritz_values(0)));
        const double residual_estimate = (m > 1 || b > 0.0) ? std::abs(b * ritz_vectors(m - 1, 0)) : 0.0;
        const bool ground_settled = m >= 2 && residual_estimate <= 0.1 * options.tolerance * scale;
        if (ground_settled || m == n) break;

        if (b <= 1e-13 * scale) {
            // Krylov space exhausted; restart in the orthogonal complement to
            // keep probing for further eigenvalues (degenerate grounds).
            Eigen::VectorXd fresh = random_vector();
            orthogonalize(fresh);
            const double norm = fresh.norm();
            if (norm <= 1e-10) break;
            fresh /= norm;
            beta.push_back(0.0);
            basis.push_back(fresh);
        } else {
            w /= b;
            beta.push_back(b);
            basis.push_back(w);
        }
    }

    const int m = static_cast<int>(alpha.size());
    Eigen::VectorXd ground = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) ground += ritz_vectors(i, 0) * basis[i];
    ground.normalize();

    const double e0 = ritz_values(0);
    const double residual = (op.apply(ground) - e0 * ground).norm();
    if (residual > options.tolerance * std::max(1.0, std::abs(e0)))
        throw NumericalError("lanczos_lowest: did not converge to the requested tolerance");

    LanczosResult result;
    result.eigenvalues = Eigen::VectorXd::Constant(2, e0);
    if (ritz_values.size() > 1) result.eigenvalues(1) = ritz_values(1);
    result.ground_vector = std::move(ground);
    result.residual = residual;
    result.iterations = iterations;
    return result;
}

GroundSpace ground_projector(const SparseOperator& h0, double tol, int degeneracy_cap) {
    if (h0.dim > kDenseCap)
        throw ParameterError("ground_projector: dimension exceeds the dense cap; restrict to a sector");
    const DenseSpectrum spectrum = dense_spectrum(h0);
    const double e0 = spectrum.eigenvalues(0);

    Eigen::Index count = 0;
    while (count < spectrum.eigenvalues.size() && spectrum.eigenvalues(count) <= e0 + tol) count++;
    if (count > degeneracy_cap)
        throw NumericalError("ground_projector: ground degeneracy exceeds the cap");

    GroundSpace gs;
    gs.energy = e0;
    gs.vectors = spectrum.eigenvectors.leftCols(count);
    gs.gap = (count < spectrum.eigenvalues.size()) ? spectrum.eigenvalues(count) - e0 : 0.0;
    return gs;
}

}  // namespace matryoshka
