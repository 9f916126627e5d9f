#include "matryoshka/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "matryoshka/errors.hpp"
#include "matryoshka/operators.hpp"
#include "matryoshka/solvers.hpp"

namespace matryoshka {

namespace {

std::uint64_t factorial_u64(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

int inversion_parity(const std::vector<int>& seq) {
    int inversions = 0;
    for (std::size_t a = 0; a < seq.size(); ++a)
        for (std::size_t b = a + 1; b < seq.size(); ++b)
            if (seq[a] > seq[b]) inversions++;
    return (inversions % 2) ? -1 : 1;
}

// Antisymmetrized assignment of the given distinct colors to the given sites,
// normalized by 1/sqrt(m!); + for ascending colors on the sites as listed.
std::vector<std::pair<Code, double>> antisym_components(const std::vector<int>& sites,
                                                        std::vector<int> colors, int k) {
    std::sort(colors.begin(), colors.end());
    const double norm = 1.0 / std::sqrt(double(factorial_u64(static_cast<int>(colors.size()))));
    std::vector<std::pair<Code, double>> components;
    do {
        Code part = 0;
        for (std::size_t t = 0; t < sites.size(); ++t)
            part += static_cast<Code>(colors[t]) * pow_u64(k + 1, sites[t] - 1);
        components.push_back({part, inversion_parity(colors) * norm});
    } while (std::next_permutation(colors.begin(), colors.end()));
    return components;
}

Eigen::VectorXd components_to_vector(const SectorBasis& basis,
                                     const std::vector<std::pair<Code, double>>& components) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.dim());
    for (const auto& [code, amp] : components)
        v(static_cast<Eigen::Index>(basis.index_of(code))) += amp;
    return v;
}

std::vector<int> ascending_colors(int k) {
    std::vector<int> colors(k + 1);
    std::iota(colors.begin(), colors.end(), 0);
    return colors;
}

}  // namespace

double StateVector::norm_deviation() const { return std::abs(1.0 - amplitudes.squaredNorm()); }

StateVector analytic_ground_state(int k, int layers, bool on_full_basis) {
    if (k < 1 || layers < 1) throw ParameterError("analytic_ground_state: k and layers must be >= 1");
    const int q = k + 1;
    const int n = q * layers;

    StateVector state;
    state.basis = on_full_basis ? full_basis(k, n) : enumerate_sector(k, n, std::vector<int>(q, layers));
    state.amplitudes = Eigen::VectorXd::Zero(state.basis.dim());

    // Signed color assignments of one layer, reused for every layer.
    std::vector<std::pair<std::vector<int>, int>> layer_terms;
    {
        std::vector<int> colors = ascending_colors(k);
        do {
            layer_terms.push_back({colors, inversion_parity(colors)});
        } while (std::next_permutation(colors.begin(), colors.end()));
    }
    const double norm = 1.0 / std::sqrt(std::pow(double(factorial_u64(q)), layers));

    std::vector<std::size_t> choice(layers, 0);
    while (true) {
        Code code = 0;
        int sign = 1;
        for (int m = 0; m < layers; ++m) {
            const auto& [colors, parity] = layer_terms[choice[m]];
            sign *= parity;
            for (int a = 0; a < q; ++a)
                code += static_cast<Code>(colors[a]) * pow_u64(q, m * q + a);
        }
        state.amplitudes(static_cast<Eigen::Index>(state.basis.index_of(code))) = sign * norm;

        int m = 0;
        while (m < layers && ++choice[m] == layer_terms.size()) choice[m++] = 0;
        if (m == layers) break;
    }
    return state;
}

ExactGroundState exact_ground_state(const SparseOperator& h, const SectorBasis& basis,
                                    const GroundStateOptions& options) {
    if (h.dim != basis.dim()) throw ParameterError("exact_ground_state: operator/basis dimension mismatch");

    SolverKind solver = options.solver;
    if (solver == SolverKind::Auto)
        solver = (h.dim <= kDenseCap) ? SolverKind::Dense : SolverKind::Iterative;

    ExactGroundState result;
    result.state.basis = basis;

    if (solver == SolverKind::Dense) {
        const DenseSpectrum spectrum = dense_spectrum(h);
        result.energy = spectrum.eigenvalues(0);
        result.state.amplitudes = spectrum.eigenvectors.col(0);
        result.second_energy = (spectrum.eigenvalues.size() > 1) ? spectrum.eigenvalues(1) : result.energy;
    } else {
        LanczosOptions lopts;
        lopts.tolerance = options.tolerance;
        lopts.seed = options.seed;
        const LanczosResult lanczos = lanczos_lowest(h, lopts);
        result.energy = lanczos.eigenvalues(0);
        result.state.amplitudes = lanczos.ground_vector;
        result.second_energy = lanczos.eigenvalues(1);
    }

    result.residual = (h.apply(result.state.amplitudes) - result.energy * result.state.amplitudes).norm();
    if (result.residual > options.tolerance * std::max(1.0, std::abs(result.energy)))
        throw NumericalError("exact_ground_state: residual above tolerance");
    result.degenerate =
        h.dim > 1 && (result.second_energy - result.energy) < options.degeneracy_tol;

    // Deterministic overall sign: largest-magnitude amplitude positive.
    Eigen::Index imax = 0;
    result.state.amplitudes.cwiseAbs().maxCoeff(&imax);
    if (result.state.amplitudes(imax) < 0.0) result.state.amplitudes = -result.state.amplitudes;
    return result;
}

ExactGroundState exact_ground_state(const SimplexLattice& lattice, std::vector<int> content,
                                    const GroundStateOptions& options) {
    if (content.empty()) content.assign(lattice.k + 1, lattice.layers);
    const SectorBasis basis = enumerate_sector(lattice.k, lattice.n_sites(), content);
    const SparseOperator h = hamiltonian(lattice, basis);
    return exact_ground_state(h, basis, options);
}

Cut Cut::radial(std::vector<int> m) {
    Cut cut;
    cut.kind = Kind::Radial;
    cut.m_per_layer = std::move(m);
    return cut;
}

Cut Cut::concentric(int boundary_layer) {
    Cut cut;
    cut.kind = Kind::Concentric;
    cut.boundary_layer = boundary_layer;
    return cut;
}

Cut Cut::explicit_sites(std::vector<int> sites) {
    Cut cut;
    cut.kind = Kind::Explicit;
    cut.sites = std::move(sites);
    return cut;
}

Cut Cut::even_odd() {
    Cut cut;
    cut.kind = Kind::EvenOdd;
    return cut;
}

std::vector<int> Cut::resolve(int k, int layers) const {
    const int q = k + 1;
    std::vector<int> result;
    switch (kind) {
        case Kind::Radial: {
            if (static_cast<int>(m_per_layer.size()) != layers)
                throw ParameterError("radial cut: need one m per layer");
            for (int n = 0; n < layers; ++n) {
                const int m = m_per_layer[n];
                if (m < 0 || m > q) throw ParameterError("radial cut: m outside 0..k+1");
                for (int a = 1; a <= m; ++a) result.push_back(n * q + a);
            }
            break;
        }
        case Kind::Concentric: {
            if (boundary_layer < 1 || boundary_layer >= layers)
                throw ParameterError("concentric cut: boundary layer must lie in 1..layers-1");
            for (int s = 1; s <= boundary_layer * q; ++s) result.push_back(s);
            break;
        }
        case Kind::EvenOdd: {
            for (int n = 0; n < layers; ++n) result.push_back(n * q + 2);
            break;
        }
        case Kind::Explicit:
            result = sites;
            break;
    }
    return result;
}

std::string Cut::descriptor() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Radial:
            os << "radial:";
            for (std::size_t i = 0; i < m_per_layer.size(); ++i) os << (i ? "," : "") << m_per_layer[i];
            break;
        case Kind::Concentric:
            os << "concentric:" << boundary_layer;
            break;
        case Kind::EvenOdd:
            os << "even-odd";
            break;
        case Kind::Explicit:
            os << "sites:";
            for (std::size_t i = 0; i < sites.size(); ++i) os << (i ? "," : "") << sites[i];
            break;
    }
    return os.str();
}

SchmidtResult schmidt(const StateVector& state, const std::vector<int>& subsystem_sites) {
    const int n = state.basis.n_sites;
    const int k = state.basis.k;

    std::vector<int> a_sites = subsystem_sites;
    std::sort(a_sites.begin(), a_sites.end());
    a_sites.erase(std::unique(a_sites.begin(), a_sites.end()), a_sites.end());
    if (a_sites.size() != subsystem_sites.size())
        throw ParameterError("schmidt: duplicate sites in the subsystem");
    if (a_sites.empty() || static_cast<int>(a_sites.size()) >= n)
        throw ParameterError("schmidt: subsystem must be a nonempty proper subset");
    if (a_sites.front() < 1 || a_sites.back() > n)
        throw ParameterError("schmidt: subsystem site outside the state");

    std::vector<int> b_sites;
    for (int s = 1; s <= n; ++s)
        if (!std::binary_search(a_sites.begin(), a_sites.end(), s)) b_sites.push_back(s);

    auto sub_code = [&](Code code, const std::vector<int>& sites) {
        Code sub = 0;
        for (std::size_t t = 0; t < sites.size(); ++t)
            sub += static_cast<Code>(color_at(code, sites[t], k)) * pow_u64(k + 1, static_cast<int>(t));
        return sub;
    };

    // Only occupied rows and columns of the amplitude matrix are materialized.
    std::map<Code, int> rows, cols;
    std::vector<std::tuple<Code, Code, double>> entries;
    for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i) {
        const double amp = state.amplitudes(i);
        if (amp == 0.0) continue;
        const Code code = state.basis.state(static_cast<std::size_t>(i));
        const Code ra = sub_code(code, a_sites);
        const Code cb = sub_code(code, b_sites);
        rows.emplace(ra, 0);
        cols.emplace(cb, 0);
        entries.emplace_back(ra, cb, amp);
    }
    int next = 0;
    for (auto& [code, idx] : rows) idx = next++;
    next = 0;
    for (auto& [code, idx] : cols) idx = next++;

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows.size(), cols.size());
    for (const auto& [ra, cb, amp] : entries) m(rows.at(ra), cols.at(cb)) += amp;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();

    SchmidtResult result;
    result.schmidt_values.assign(sv.data(), sv.data() + sv.size());
    double total = 0.0, entropy = 0.0;
    for (double s : result.schmidt_values) {
        const double p = s * s;
        total += p;
        if (p > 0.0) entropy -= p * std::log(p);
    }
    result.entropy = entropy;
    result.normalization_deviation = std::abs(1.0 - total);
    return result;
}

double radial_entropy(int k, int layers, const std::vector<int>& m_per_layer) {
    if (static_cast<int>(m_per_layer.size()) != layers)
        throw ParameterError("radial_entropy: need one m per layer");
    double entropy = 0.0;
    for (int m : m_per_layer) {
        if (m < 0 || m > k + 1) throw ParameterError("radial_entropy: m outside 0..k+1");
        // ln C(k+1, m)
        std::uint64_t binom = factorial_u64(k + 1) / (factorial_u64(m) * factorial_u64(k + 1 - m));
        entropy += std::log(double(binom));
    }
    return entropy;
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (!a.basis.same_basis(b.basis)) throw ParameterError("fidelity: basis mismatch");
    const double na = a.amplitudes.squaredNorm();
    const double nb = b.amplitudes.squaredNorm();
    if (na == 0.0 || nb == 0.0) throw ParameterError("fidelity: zero state");
    const double overlap = a.amplitudes.dot(b.amplitudes);
    return overlap * overlap / (na * nb);
}

SingletIdentityReport singlet_identities(int k) {
    if (k != 2 && k != 3) throw ParameterError("singlet_identities: k must be 2 or 3");
    const int q = k + 1;
    SingletIdentityReport report;

    // (i) Two-site singlets on three sites: the three bond orientations are
    // linearly dependent whenever the spectator site carries a bond color.
    {
        const SectorBasis basis = full_basis(k, 3);
        auto bond_state = [&](int i, int j, int c1, int c2, int spectator, int v) {
            std::vector<std::pair<Code, double>> comps = antisym_components({i, j}, {c1, c2}, k);
            for (auto& [code, amp] : comps) code += static_cast<Code>(v) * pow_u64(q, spectator - 1);
            return components_to_vector(basis, comps);
        };
        for (int c1 = 0; c1 <= k; ++c1) {
            for (int c2 = c1 + 1; c2 <= k; ++c2) {
                for (int v : {c1, c2}) {
                    const Eigen::VectorXd lhs = bond_state(1, 2, c1, c2, 3, v) +
                                                bond_state(2, 3, c1, c2, 1, v) -
                                                bond_state(1, 3, c1, c2, 2, v);
                    report.overcompleteness_residual =
                        std::max(report.overcompleteness_residual, lhs.cwiseAbs().maxCoeff());
                }
            }
        }
    }

    // (ii) Reversing the arrow flips the sign: two-site bonds and the
    // (k+1)-site loop singlet.
    {
        const SectorBasis pair_basis = full_basis(k, 2);
        for (int c1 = 0; c1 <= k; ++c1) {
            for (int c2 = c1 + 1; c2 <= k; ++c2) {
                const Eigen::VectorXd forward =
                    components_to_vector(pair_basis, antisym_components({1, 2}, {c1, c2}, k));
                const Eigen::VectorXd reversed =
                    components_to_vector(pair_basis, antisym_components({2, 1}, {c1, c2}, k));
                report.arrow_reversal_residual =
                    std::max(report.arrow_reversal_residual, (forward + reversed).cwiseAbs().maxCoeff());
            }
        }

        const SectorBasis loop_basis = full_basis(k, q);
        std::vector<int> forward_order(q), reversed_order(q);
        std::iota(forward_order.begin(), forward_order.end(), 1);
        reversed_order[0] = 1;
        for (int t = 1; t < q; ++t) reversed_order[t] = q + 1 - t;
        const Eigen::VectorXd forward =
            components_to_vector(loop_basis, antisym_components(forward_order, ascending_colors(k), k));
        const Eigen::VectorXd reversed =
            components_to_vector(loop_basis, antisym_components(reversed_order, ascending_colors(k), k));
        report.arrow_reversal_residual =
            std::max(report.arrow_reversal_residual, (forward + reversed).cwiseAbs().maxCoeff());
    }

    // (iii) Facet bonds acting on a simplex singlet with an attached external
    // site: terms keeping the untouched partner color cancel, leaving one
    // (k-site singlet) x (emitted color) state per outgoing color.
    {
        const SectorBasis basis = full_basis(k, q + 1);
        const int ext = q + 1;
        std::vector<int> facet(q - 1);
        std::iota(facet.begin(), facet.end(), 2);  // sites 2..q; site 1 is the partner

        std::vector<int> all_sites(q);
        std::iota(all_sites.begin(), all_sites.end(), 1);

        for (int c = 0; c <= k; ++c) {
            std::vector<std::pair<Code, double>> singlet =
                antisym_components(all_sites, ascending_colors(k), k);
            for (auto& [code, amp] : singlet) code += static_cast<Code>(c) * pow_u64(q, ext - 1);
            const Eigen::VectorXd start = components_to_vector(basis, singlet);

            Eigen::VectorXd lhs = Eigen::VectorXd::Zero(basis.dim());
            for (int j : facet) lhs += bond_operator(k, j, ext, basis).apply(start);

            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.dim());
            for (int d = 0; d <= k; ++d) {
                if (d == c) continue;
                std::vector<int> remaining;  // colors of the facet singlet
                for (int col = 0; col <= k; ++col)
                    if (col != d) remaining.push_back(col);

                // Sign of the color sequence (c at site 1, then the facet
                // colors ascending with c replaced by d).
                std::vector<int> sequence(1, c);
                for (int col : remaining) sequence.push_back(col == c ? d : col);
                const double w = inversion_parity(sequence) / std::sqrt(double(q));

                std::vector<std::pair<Code, double>> comps = antisym_components(facet, remaining, k);
                const Code fixed =
                    static_cast<Code>(c) + static_cast<Code>(d) * pow_u64(q, ext - 1);
                for (auto& [code, amp] : comps) {
                    code += fixed;
                    amp *= w;
                }
                rhs += components_to_vector(basis, comps);
            }
            report.action_identity_residual =
                std::max(report.action_identity_residual, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    }

    return report;
}

}  // namespace matryoshka
