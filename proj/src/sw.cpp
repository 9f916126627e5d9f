#include "matryoshka/sw.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "matryoshka/errors.hpp"
#include "matryoshka/operators.hpp"

namespace matryoshka {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

SparseVec apply_to_sparse(const SparseOperator& op, const SparseVec& x,
                          std::vector<double>& scratch, std::vector<std::size_t>& touched) {
    // scratch is a zeroed dense accumulator of size op.dim, restored on exit.
    for (const auto& [idx, val] : x.entries) {
        for (std::size_t t = op.row_ptr[idx]; t < op.row_ptr[idx + 1]; ++t) {
            // Symmetric operator: row idx lists exactly the columns coupling to idx.
            const std::size_t target = op.triplets[t].col;
            if (scratch[target] == 0.0) touched.push_back(target);
            scratch[target] += op.triplets[t].value * val;
        }
    }
    SparseVec result;
    result.entries.reserve(touched.size());
    std::sort(touched.begin(), touched.end());
    for (std::size_t idx : touched)
        if (scratch[idx] != 0.0) result.entries.push_back({idx, scratch[idx]});
    for (std::size_t idx : touched) scratch[idx] = 0.0;
    touched.clear();
    return result;
}

double sparse_dot(const SparseVec& a, const SparseVec& b) {
    double acc = 0.0;
    auto ia = a.entries.begin();
    auto ib = b.entries.begin();
    while (ia != a.entries.end() && ib != b.entries.end()) {
        if (ia->first < ib->first)
            ++ia;
        else if (ib->first < ia->first)
            ++ib;
        else
            acc += (ia++)->second * (ib++)->second;
    }
    return acc;
}

}  // namespace

EffectiveHamiltonian schrieffer_wolff_2nd(const SparseOperator& h0, const SparseOperator& v,
                                          double j, const GroundBasis& ground) {
    if (h0.dim != v.dim) throw ParameterError("schrieffer_wolff_2nd: H0 and V dimensions differ");
    if (h0.basis_tag != v.basis_tag)
        throw ParameterError("schrieffer_wolff_2nd: H0 and V live on different bases");
    if (ground.columns.empty()) throw ParameterError("schrieffer_wolff_2nd: empty ground basis");

    const std::size_t n = h0.dim;
    const int m = static_cast<int>(ground.columns.size());
    const double e0 = ground.energy;
    const double gap_guard = 1e-8 * std::max(1.0, std::abs(e0));

    std::vector<double> scratch(n, 0.0);
    std::vector<std::size_t> touched;

    // First order and P0 H0 P0, plus the one-V images feeding the resolvent.
    std::vector<SparseVec> w(m);
    Eigen::MatrixXd first_order(m, m), h00(m, m);
    for (int b = 0; b < m; ++b) {
        w[b] = apply_to_sparse(v, ground.columns[b], scratch, touched);
        SparseVec h0g = apply_to_sparse(h0, ground.columns[b], scratch, touched);
        for (int a = 0; a < m; ++a) {
            first_order(a, b) = sparse_dot(ground.columns[a], w[b]);
            h00(a, b) = sparse_dot(ground.columns[a], h0g);
        }
    }

    // Invariant blocks of H0 reachable from the one-V images: breadth-first
    // closure over the H0 adjacency.
    std::unordered_map<std::size_t, int> block_of;
    std::vector<std::vector<std::size_t>> blocks;
    for (const auto& column : w) {
        for (const auto& [seed, val] : column.entries) {
            (void)val;
            if (block_of.count(seed)) continue;
            const int id = static_cast<int>(blocks.size());
            std::vector<std::size_t> members;
            std::queue<std::size_t> frontier;
            frontier.push(seed);
            block_of[seed] = id;
            while (!frontier.empty()) {
                const std::size_t idx = frontier.front();
                frontier.pop();
                members.push_back(idx);
                for (std::size_t t = h0.row_ptr[idx]; t < h0.row_ptr[idx + 1]; ++t) {
                    const std::size_t next = h0.triplets[t].col;
                    if (next == idx || block_of.count(next)) continue;
                    block_of[next] = id;
                    frontier.push(next);
                }
            }
            std::sort(members.begin(), members.end());
            blocks.push_back(std::move(members));
        }
    }

    // Bucket the image components by block.
    std::vector<std::vector<std::tuple<int, std::size_t, double>>> bucket(blocks.size());
    double image_scale = 0.0;
    for (int b = 0; b < m; ++b) {
        for (const auto& [idx, val] : w[b].entries) {
            bucket[block_of.at(idx)].emplace_back(b, idx, val);
            image_scale = std::max(image_scale, std::abs(val));
        }
    }

    Eigen::MatrixXd second_order = Eigen::MatrixXd::Zero(m, m);
    double gap = 0.0;

    for (std::size_t blk = 0; blk < blocks.size(); ++blk) {
        if (bucket[blk].empty()) continue;
        const auto& members = blocks[blk];
        const int dim = static_cast<int>(members.size());
        if (static_cast<std::size_t>(dim) > kDenseCap)
            throw NumericalError("schrieffer_wolff_2nd: reachable block exceeds the dense cap");

        std::unordered_map<std::size_t, int> local;
        local.reserve(members.size());
        for (int i = 0; i < dim; ++i) local[members[i]] = i;

        Eigen::MatrixXd hb = Eigen::MatrixXd::Zero(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (std::size_t t = h0.row_ptr[members[i]]; t < h0.row_ptr[members[i] + 1]; ++t)
                hb(i, local.at(h0.triplets[t].col)) += h0.triplets[t].value;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(hb);
        if (eig.info() != Eigen::Success) throw NumericalError("schrieffer_wolff_2nd: block eigensolver failed");

        // Ground-basis columns with weight in this block, gathered locally.
        std::vector<int> cols;
        std::vector<Eigen::VectorXd> x;
        for (std::size_t t = 0; t < bucket[blk].size(); ++t) {
            const auto& [b, idx, val] = bucket[blk][t];
            if (cols.empty() || cols.back() != b) {
                cols.push_back(b);
                x.emplace_back(Eigen::VectorXd::Zero(dim));
            }
            x.back()(local.at(idx)) = val;
        }
        std::vector<Eigen::VectorXd> y(x.size());
        for (std::size_t c = 0; c < x.size(); ++c) y[c] = eig.eigenvectors().transpose() * x[c];

        // Cluster degenerate levels so every vector in a level shares one
        // denominator.
        const double cluster_tol = 1e-9 * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
        int t0 = 0;
        while (t0 < dim) {
            int t1 = t0 + 1;
            while (t1 < dim && eig.eigenvalues()(t1) - eig.eigenvalues()(t1 - 1) <= cluster_tol) t1++;
            double level = 0.0;
            for (int t = t0; t < t1; ++t) level += eig.eigenvalues()(t);
            level /= (t1 - t0);

            double weight = 0.0;
            for (std::size_t c = 0; c < y.size(); ++c)
                for (int t = t0; t < t1; ++t) weight = std::max(weight, std::abs(y[c](t)));

            if (std::abs(level - e0) <= gap_guard) {
                // Ground-energy level: legitimate only when it lies inside the
                // retained subspace (its effect is the first-order block).
                if (weight > 1e-8 * std::max(1.0, image_scale)) {
                    double inside = 1.0;
                    for (int t = t0; t < t1; ++t) {
                        SparseVec u;
                        for (int i = 0; i < dim; ++i)
                            if (eig.eigenvectors()(i, t) != 0.0)
                                u.entries.push_back({members[i], eig.eigenvectors()(i, t)});
                        double overlap = 0.0;
                        for (const auto& g : ground.columns) {
                            const double d = sparse_dot(g, u);
                            overlap += d * d;
                        }
                        inside = std::min(inside, overlap);
                    }
                    if (inside < 0.999)
                        throw NumericalError("schrieffer_wolff_2nd: vanishing gap; V couples the ground "
                                             "subspace to a degenerate state outside it");
                }
                t0 = t1;
                continue;
            }

            if (weight > 1e-13 * std::max(1.0, image_scale)) {
                const double distance = std::abs(level - e0);
                gap = (gap == 0.0) ? distance : std::min(gap, distance);
            }
            const double denom = 1.0 / (e0 - level);
            for (std::size_t ca = 0; ca < y.size(); ++ca)
                for (std::size_t cb = 0; cb < y.size(); ++cb) {
                    double acc = 0.0;
                    for (int t = t0; t < t1; ++t) acc += y[ca](t) * y[cb](t);
                    second_order(cols[ca], cols[cb]) += denom * acc;
                }
            t0 = t1;
        }
    }

    if (gap <= 0.0 && blocks.size() > 0 && image_scale > 0.0)
        throw NumericalError("schrieffer_wolff_2nd: no excited level reached; vanishing gap");

    EffectiveHamiltonian eff;
    eff.inner_dim = static_cast<std::size_t>(m);
    eff.matrix = h00 + j * first_order + j * j * second_order;
    eff.coupling = j;
    eff.ground_energy = e0;
    eff.gap = gap;
    return eff;
}

EffectiveHamiltonian schrieffer_wolff_2nd(const SparseOperator& h0, const SparseOperator& v, double j,
                                          double ground_tol, int degeneracy_cap) {
    const GroundSpace gs = ground_projector(h0, ground_tol, degeneracy_cap);
    GroundBasis ground;
    ground.energy = gs.energy;
    ground.columns.resize(gs.vectors.cols());
    for (Eigen::Index c = 0; c < gs.vectors.cols(); ++c) {
        for (Eigen::Index r = 0; r < gs.vectors.rows(); ++r) {
            const double val = gs.vectors(r, c);
            if (val != 0.0)
                ground.columns[c].entries.push_back({static_cast<std::size_t>(r), val});
        }
    }
    return schrieffer_wolff_2nd(h0, v, j, ground);
}

TwoLayerBlock two_layer_block(int k, double j_inner) {
    if (k < 1) throw ParameterError("two_layer_block: k must be >= 1");
    if (j_inner <= 0.0) throw ParameterError("two_layer_block: j_inner must be positive");
    const int q = k + 1;

    TwoLayerBlock block;
    block.basis = full_basis(k, 2 * q);
    block.h0 = hamiltonian(simplex_bonds(k, j_inner), block.basis);

    std::vector<Bond> link_bonds;
    for (int a = 1; a <= q; ++a)
        for (int b = 1; b <= q; ++b)
            if (b != a) link_bonds.push_back({b, q + a, 1.0});
    std::sort(link_bonds.begin(), link_bonds.end(),
              [](const Bond& x, const Bond& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });
    block.v = hamiltonian(link_bonds, block.basis);

    // Inner singlet from the single-simplex block, sign fixed on the
    // ascending color configuration.
    const SectorBasis inner = full_basis(k, q);
    const SparseOperator h_inner = hamiltonian(simplex_bonds(k, j_inner), inner);
    const GroundSpace gs = ground_projector(h_inner, 1e-9 * std::max(1.0, j_inner), 1);
    Eigen::VectorXd singlet = gs.vectors.col(0);
    Code ascending = 0;
    for (int a = 0; a < q; ++a) ascending = ascending * q + static_cast<Code>(q - 1 - a);
    if (singlet(static_cast<Eigen::Index>(ascending)) < 0.0) singlet = -singlet;

    const Code inner_dim = pow_u64(q, q);
    block.ground.energy = gs.energy;
    block.ground.columns.resize(inner_dim);
    for (Code outer = 0; outer < inner_dim; ++outer) {
        SparseVec column;
        for (Eigen::Index x = 0; x < singlet.size(); ++x) {
            if (std::abs(singlet(x)) < 1e-14) continue;
            column.entries.push_back({static_cast<std::size_t>(outer * inner_dim + static_cast<Code>(x)),
                                      singlet(x)});
        }
        block.ground.columns[outer] = std::move(column);
    }
    return block;
}

RGStepReport rg_step_core(int k, double j_inner, double j_link, int layer_index) {
    TwoLayerBlock block = two_layer_block(k, j_inner);
    EffectiveHamiltonian eff = schrieffer_wolff_2nd(block.h0, block.v, j_link, block.ground);
    eff.k = k;
    eff.layer = layer_index;

    const int q = k + 1;
    const SectorBasis outer = full_basis(k, q);
    const SparseOperator exchange = hamiltonian(simplex_bonds(k, 1.0), outer);

    const Eigen::MatrixXd m = eff.matrix - eff.ground_energy * Eigen::MatrixXd::Identity(eff.matrix.rows(),
                                                                                         eff.matrix.cols());
    double shift = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) shift += m(i, i);
    shift /= static_cast<double>(m.rows());

    double coupling = 0.0;
    std::size_t exchange_entries = 0;
    for (const Triplet& t : exchange.triplets) {
        if (t.row == t.col) continue;
        coupling += m(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) / t.value;
        exchange_entries++;
    }
    coupling /= static_cast<double>(exchange_entries);

    Eigen::MatrixXd model = shift * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    for (const Triplet& t : exchange.triplets)
        model(static_cast<Eigen::Index>(t.row), static_cast<Eigen::Index>(t.col)) += coupling * t.value;
    const double deviation = (m - model).cwiseAbs().maxCoeff();

    RGStepReport report;
    report.layer = layer_index;
    report.j_inner = j_inner;
    report.j_link = j_link;
    report.renormalized_coupling = coupling;
    report.constant_shift = shift;
    report.deviation = deviation;
    report.dasgupta_ma = j_link * j_link / (factorial(q) * j_inner);
    report.gap = eff.gap;
    report.ground_energy = eff.ground_energy;

    // alpha_eff = j_link^2 / ((k+1)! j_inner^2) reaches 1/(k+1)! when the link
    // coupling catches up with the block it perturbs. Flag from half that
    // point on, or when the link exceeds the block gap outright.
    const double alpha_eff = j_link * j_link / (factorial(q) * j_inner * j_inner);
    if (alpha_eff >= 0.5 / factorial(q) || j_link >= eff.gap) {
        std::ostringstream os;
        os << "perturbative-regime: alpha_eff=" << alpha_eff << " approaches the flat point 1/(k+1)!="
           << 1.0 / factorial(q) << " (gap=" << eff.gap << ", J=" << j_link << ")";
        report.warnings.push_back(os.str());
    }
    return report;
}

RGStepReport rg_step(const SimplexLattice& lattice, int layer) {
    if (layer < 1 || layer > lattice.layers - 1)
        throw ParameterError("rg_step: layer must lie in 1..layers-1");
    double j_inner = 1.0;
    RGStepReport report;
    for (int n = 1; n <= layer; ++n) {
        report = rg_step_core(lattice.k, j_inner, interlayer_coupling(lattice.k, n, lattice.alpha), n);
        j_inner = report.renormalized_coupling;
    }
    return report;
}

std::vector<RGStepReport> effective_flow(const SimplexLattice& lattice) {
    if (lattice.layers < 2) throw ParameterError("effective_flow: need at least 2 layers");
    std::vector<RGStepReport> reports;
    double j_inner = 1.0;
    for (int n = 1; n <= lattice.layers - 1; ++n) {
        reports.push_back(rg_step_core(lattice.k, j_inner,
                                       interlayer_coupling(lattice.k, n, lattice.alpha), n));
        j_inner = reports.back().renormalized_coupling;
    }
    return reports;
}

}  // namespace matryoshka
