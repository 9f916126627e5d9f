#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "matryoshka/basis.hpp"
#include "matryoshka/entanglement.hpp"
#include "matryoshka/errors.hpp"
#include "matryoshka/lattice.hpp"
#include "matryoshka/operators.hpp"

using namespace matryoshka;

namespace {

Code code_of(std::initializer_list<int> colors, int k) {
    Code c = 0;
    int site = 1;
    for (int color : colors) c += static_cast<Code>(color) * pow_u64(k + 1, (site++) - 1);
    return c;
}

}  // namespace

TEST_CASE("analytic single-layer state is the normalized antisymmetrizer") {
    const StateVector p1 = analytic_ground_state(2, 1);
    CHECK(p1.basis.dim() == 6);
    CHECK(p1.norm_deviation() <= 1e-12);
    int nonzero = 0;
    for (Eigen::Index i = 0; i < p1.amplitudes.size(); ++i) {
        if (p1.amplitudes(i) != 0.0) {
            nonzero++;
            CHECK(std::abs(std::abs(p1.amplitudes(i)) - 1.0 / std::sqrt(6.0)) <= 1e-14);
        }
    }
    CHECK(nonzero == 6);
    // + for ascending colors on ascending sites, - after one transposition.
    CHECK(p1.amplitudes(p1.basis.index_of(code_of({0, 1, 2}, 2))) > 0.0);
    CHECK(p1.amplitudes(p1.basis.index_of(code_of({1, 0, 2}, 2))) < 0.0);
}

TEST_CASE("analytic two-layer state is a product of layer singlets") {
    const StateVector p2 = analytic_ground_state(2, 2);
    CHECK(p2.basis.dim() == 90);
    CHECK(p2.norm_deviation() <= 1e-12);
    int nonzero = 0;
    for (Eigen::Index i = 0; i < p2.amplitudes.size(); ++i)
        if (p2.amplitudes(i) != 0.0) {
            nonzero++;
            CHECK(std::abs(std::abs(p2.amplitudes(i)) - 1.0 / 6.0) <= 1e-14);
        }
    CHECK(nonzero == 36);
}

TEST_CASE("inter-layer bonds have zero expectation in the analytic state") {
    const StateVector p2 = analytic_ground_state(2, 2);
    const SimplexLattice lat = build_lattice(2, 2, 0.01);
    const SparseOperator h = hamiltonian(lat, p2.basis);
    const double energy = p2.amplitudes.dot(h.apply(p2.amplitudes));
    CHECK(std::abs(energy + 3.0) <= 1e-12);
}

TEST_CASE("analytic state on the full basis agrees with the sector embedding") {
    const StateVector sector = analytic_ground_state(2, 1);
    const StateVector full = analytic_ground_state(2, 1, true);
    CHECK(full.basis.dim() == 27);
    for (std::size_t i = 0; i < sector.basis.dim(); ++i)
        CHECK(full.amplitudes(sector.basis.state(i)) == sector.amplitudes(i));
}

TEST_CASE("exact ground state of a single simplex") {
    const ExactGroundState g = exact_ground_state(build_lattice(2, 1, 0.1));
    CHECK(std::abs(g.energy + 3.0) <= 1e-12);
    CHECK(g.residual <= 1e-10);
    CHECK(!g.degenerate);
    CHECK(fidelity(g.state, analytic_ground_state(2, 1)) >= 1.0 - 1e-12);
}

TEST_CASE("exact two-layer ground state at alpha = 0.01") {
    const ExactGroundState g = exact_ground_state(build_lattice(2, 2, 0.01));
    // Dense-oracle value; the leading behavior is -3 - 9a + O(a^{3/2}) with a
    // large remainder prefactor (about 31).
    CHECK(g.energy == doctest::Approx(-3.1370065285927).epsilon(1e-10));
    const double leading = -3.0 - 9.0 * 0.01;
    CHECK(std::abs(g.energy - leading) <= 50.0 * std::pow(0.01, 1.5));
    CHECK(!g.degenerate);
}

TEST_CASE("expansion of the exact energy approaches -3 - 9 alpha") {
    double previous_ratio = 1e9;
    for (double alpha : {1e-2, 1e-3, 1e-4}) {
        const ExactGroundState g = exact_ground_state(build_lattice(2, 2, alpha));
        const double remainder = std::abs(g.energy - (-3.0 - 9.0 * alpha));
        const double ratio = remainder / alpha;  // -> 0 iff remainder is o(alpha)
        CHECK(ratio < previous_ratio);
        previous_ratio = ratio;
    }
}

TEST_CASE("decoupled outer layer flags a degenerate ground state") {
    SimplexLattice lat = build_lattice(2, 2, 0.04);
    lat.bonds.erase(std::remove_if(lat.bonds.begin(), lat.bonds.end(),
                                   [](const Bond& b) { return b.coupling != 1.0; }),
                    lat.bonds.end());
    const SectorBasis b = full_basis(2, 6);
    const ExactGroundState g = exact_ground_state(hamiltonian(lat, b), b);
    CHECK(std::abs(g.energy + 3.0) <= 1e-10);
    CHECK(g.degenerate);
}

TEST_CASE("fidelity basics") {
    const StateVector p2 = analytic_ground_state(2, 2);
    CHECK(fidelity(p2, p2) == doctest::Approx(1.0).epsilon(1e-13));

    StateVector other = p2;
    other.amplitudes.setZero();
    other.amplitudes(0) = 1.0;  // a configuration orthogonal to every singlet product
    CHECK(std::abs(fidelity(p2, other) - p2.amplitudes(0) * p2.amplitudes(0)) <= 1e-13);

    const StateVector p1 = analytic_ground_state(2, 1);
    CHECK_THROWS_AS(fidelity(p2, p1), ParameterError);
}

TEST_CASE("fidelity against the exact state at alpha = 0.01") {
    const ExactGroundState g = exact_ground_state(build_lattice(2, 2, 0.01));
    const double f = fidelity(g.state, analytic_ground_state(2, 2));
    // Dense-oracle value (the perturbative overlap at this alpha).
    CHECK(f == doctest::Approx(0.90115363323).epsilon(1e-8));
}

TEST_CASE("one minus fidelity shrinks roughly linearly in alpha") {
    std::vector<double> alphas{1e-2, 3e-3, 1e-3};
    std::vector<double> infidelity;
    for (double alpha : alphas) {
        const ExactGroundState g = exact_ground_state(build_lattice(2, 2, alpha));
        infidelity.push_back(1.0 - fidelity(g.state, analytic_ground_state(2, 2)));
    }
    CHECK(infidelity[0] > infidelity[1]);
    CHECK(infidelity[1] > infidelity[2]);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const double x = std::log(alphas[i]), y = std::log(infidelity[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = double(alphas.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope >= 0.7);
    CHECK(slope <= 1.3);
}

TEST_CASE("Schmidt decomposition of the single-layer singlet") {
    const StateVector p1 = analytic_ground_state(2, 1);
    const SchmidtResult r = schmidt(p1, {2});
    CHECK(r.entropy == doctest::Approx(std::log(3.0)).epsilon(1e-12));
    REQUIRE(r.schmidt_values.size() == 3);
    for (double s : r.schmidt_values) CHECK(s == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(r.normalization_deviation <= 1e-10);
}

TEST_CASE("even/odd and concentric cuts of the analytic two-layer state") {
    const StateVector p2 = analytic_ground_state(2, 2);
    CHECK(schmidt(p2, Cut::even_odd().resolve(2, 2)).entropy ==
          doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-12));
    CHECK(schmidt(p2, {2, 5}).entropy == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-12));
    CHECK(std::abs(schmidt(p2, Cut::concentric(1).resolve(2, 2)).entropy) <= 1e-12);
}

TEST_CASE("cut resolution and validation") {
    CHECK(Cut::even_odd().resolve(2, 3) == std::vector<int>{2, 5, 8});
    CHECK(Cut::radial({1, 2}).resolve(2, 2) == std::vector<int>{1, 4, 5});
    CHECK(Cut::concentric(1).resolve(2, 2) == std::vector<int>{1, 2, 3});
    CHECK(Cut::radial({1, 2}).descriptor() == "radial:1,2");
    CHECK(Cut::concentric(2).descriptor() == "concentric:2");
    CHECK_THROWS_AS(Cut::radial({1}).resolve(2, 2), ParameterError);
    CHECK_THROWS_AS(Cut::radial({4, 0}).resolve(2, 2), ParameterError);
    CHECK_THROWS_AS(Cut::concentric(2).resolve(2, 2), ParameterError);

    const StateVector p2 = analytic_ground_state(2, 2);
    CHECK_THROWS_AS(schmidt(p2, {}), ParameterError);
    CHECK_THROWS_AS(schmidt(p2, {1, 2, 3, 4, 5, 6}), ParameterError);
    CHECK_THROWS_AS(schmidt(p2, {1, 1}), ParameterError);
    CHECK_THROWS_AS(schmidt(p2, {7}), ParameterError);
}

TEST_CASE("radial entropy closed form") {
    CHECK(radial_entropy(2, 2, {1, 1}) == doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-14));
    CHECK(radial_entropy(3, 2, {1, 1}) == doctest::Approx(2.0 * std::log(4.0)).epsilon(1e-14));
    CHECK(radial_entropy(3, 2, {2, 2}) == doctest::Approx(2.0 * std::log(6.0)).epsilon(1e-14));
    CHECK(radial_entropy(2, 2, {0, 3}) == 0.0);
    CHECK_THROWS_AS(radial_entropy(2, 2, {1}), ParameterError);
    CHECK_THROWS_AS(radial_entropy(2, 2, {1, 4}), ParameterError);
}

TEST_CASE("radial entropy cross-validates against the Schmidt route") {
    // k=3 single layer: m-site cuts of the 4-site singlet.
    const StateVector p1 = analytic_ground_state(3, 1);
    CHECK(schmidt(p1, {1}).entropy == doctest::Approx(radial_entropy(3, 1, {1})).epsilon(1e-12));
    CHECK(schmidt(p1, {1, 2}).entropy == doctest::Approx(radial_entropy(3, 1, {2})).epsilon(1e-12));
    CHECK(schmidt(p1, {1, 2, 3}).entropy == doctest::Approx(radial_entropy(3, 1, {3})).epsilon(1e-12));

    // Two layers, uneven per-layer counts.
    const StateVector p2 = analytic_ground_state(2, 2);
    CHECK(schmidt(p2, Cut::radial({1, 2}).resolve(2, 2)).entropy ==
          doctest::Approx(radial_entropy(2, 2, {1, 2})).epsilon(1e-12));
}

TEST_CASE("entropy additivity over layers for the analytic state") {
    const StateVector p2 = analytic_ground_state(2, 2);
    const struct {
        std::vector<int> sites;
        std::vector<int> m;
    } cases[] = {
        {{1}, {1, 0}},
        {{1, 4}, {1, 1}},
        {{1, 2, 4}, {2, 1}},
        {{1, 2, 3, 4}, {3, 1}},
        {{2, 4, 5}, {1, 2}},
    };
    for (const auto& c : cases)
        CHECK(schmidt(p2, c.sites).entropy == doctest::Approx(radial_entropy(2, 2, c.m)).epsilon(1e-12));
}

TEST_CASE("three-layer analytic state carries N log 3 across the even/odd cut") {
    const StateVector p3 = analytic_ground_state(2, 3);
    CHECK(p3.basis.dim() == 1680);
    CHECK(schmidt(p3, Cut::even_odd().resolve(2, 3)).entropy ==
          doctest::Approx(3.0 * std::log(3.0)).epsilon(1e-12));
    CHECK(std::abs(schmidt(p3, Cut::concentric(2).resolve(2, 3)).entropy) <= 1e-12);
}

TEST_CASE("exact-state entropies at alpha = 0.01 (dense-oracle values)") {
    const ExactGroundState g = exact_ground_state(build_lattice(2, 2, 0.01));
    const double even_odd = schmidt(g.state, Cut::even_odd().resolve(2, 2)).entropy;
    const double concentric = schmidt(g.state, Cut::concentric(1).resolve(2, 2)).entropy;
    CHECK(even_odd == doctest::Approx(2.0915991173).epsilon(1e-7));
    CHECK(concentric == doctest::Approx(0.5831207992).epsilon(1e-7));
    // Both approach the analytic-state values as alpha shrinks.
    const ExactGroundState g2 = exact_ground_state(build_lattice(2, 2, 0.001));
    CHECK(std::abs(schmidt(g2.state, Cut::even_odd().resolve(2, 2)).entropy - 2.0 * std::log(3.0)) <
          std::abs(even_odd - 2.0 * std::log(3.0)));
    CHECK(schmidt(g2.state, Cut::concentric(1).resolve(2, 2)).entropy < concentric);
}

TEST_CASE("singlet identities for k = 2 and 3") {
    for (int k : {2, 3}) {
        const SingletIdentityReport r = singlet_identities(k);
        CHECK(r.overcompleteness_residual < 1e-14);
        CHECK(r.arrow_reversal_residual < 1e-14);
        CHECK(r.action_identity_residual < 1e-14);
    }
    CHECK_THROWS_AS(singlet_identities(4), ParameterError);
}

TEST_CASE("the explicit facet-bond action on the k=2 singlet") {
    // (h_{3,4} + h_{2,4}) A_{123} x |R>_4
    //   = (|RGR> - |RRG>) x |B> / sqrt6 + (|RRB> - |RBR>) x |G> / sqrt6.
    const SectorBasis b = full_basis(2, 4);
    const StateVector p1 = analytic_ground_state(2, 1, true);
    Eigen::VectorXd start = Eigen::VectorXd::Zero(b.dim());
    for (Code inner = 0; inner < 27; ++inner)
        start(inner + 0 * 27) = p1.amplitudes(inner);  // color R = 0 at site 4

    const Eigen::VectorXd lhs = bond_operator(2, 3, 4, b).apply(start) +
                                bond_operator(2, 2, 4, b).apply(start);

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(b.dim());
    const double w = 1.0 / std::sqrt(6.0);
    rhs(code_of({0, 1, 0, 2}, 2)) += w;   // |RGR>|B>
    rhs(code_of({0, 0, 1, 2}, 2)) -= w;   // |RRG>|B>
    rhs(code_of({0, 0, 2, 1}, 2)) += w;   // |RRB>|G>
    rhs(code_of({0, 2, 0, 1}, 2)) -= w;   // |RBR>|G>
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-14);
}
