#include "matryoshka/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "matryoshka/errors.hpp"

namespace matryoshka {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

double interlayer_coupling(int k, int n, double alpha) {
    return std::sqrt(factorial(k + 1)) * std::pow(alpha, n - 0.5);
}

SimplexLattice build_lattice(int k, int layers, double alpha) {
    if (k < 1) throw ParameterError("k must be >= 1");
    if (layers < 1) throw ParameterError("layers must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");

    SimplexLattice lat;
    lat.k = k;
    lat.layers = layers;
    lat.alpha = alpha;

    const int q = k + 1;
    for (int n = 1; n <= layers; ++n)
        for (int a = 1; a <= q; ++a)
            lat.sites.push_back({(n - 1) * q + a, n, a});

    // Layer 1: all pairs at coupling 1.
    for (int a = 1; a <= q; ++a)
        for (int b = a + 1; b <= q; ++b)
            lat.bonds.push_back({a, b, 1.0});

    // Between layers n and n+1: local index a couples to every b != a.
    for (int n = 1; n <= layers - 1; ++n) {
        const double coupling = interlayer_coupling(k, n, alpha);
        for (int a = 1; a <= q; ++a) {
            const int outer = lat.site_id(n + 1, a);
            for (int b = 1; b <= q; ++b) {
                if (b == a) continue;
                const int inner = lat.site_id(n, b);
                lat.bonds.push_back({std::min(inner, outer), std::max(inner, outer), coupling});
            }
        }
    }

    std::sort(lat.bonds.begin(), lat.bonds.end(),
              [](const Bond& x, const Bond& y) { return std::tie(x.i, x.j) < std::tie(y.i, y.j); });

    // At alpha = 1/(k+1)! the first inter-layer coupling reaches J_0 and the
    // layer-by-layer perturbation theory breaks down.
    if (layers >= 2 && alpha >= 1.0 / factorial(q))
        lat.warnings.push_back("alpha >= 1/(k+1)!: inter-layer coupling is not weaker than "
                               "the innermost bond; perturbative treatment is unreliable");

    return lat;
}

std::vector<std::vector<double>> regular_simplex_vertices(int k) {
    // Columns of the Helmert basis of the sum-zero hyperplane, rescaled to
    // unit circumradius.
    std::vector<std::vector<double>> v(k + 1, std::vector<double>(k, 0.0));
    const double scale = std::sqrt(double(k + 1) / double(k));
    for (int d = 1; d <= k; ++d) {
        const double norm = std::sqrt(double(d) * double(d + 1));
        for (int a = 0; a <= k; ++a) {
            double q = 0.0;
            if (a < d)
                q = 1.0 / norm;
            else if (a == d)
                q = -double(d) / norm;
            v[a][d - 1] = q * scale;
        }
    }
    return v;
}

Embedding embed_lattice(const SimplexLattice& lattice) {
    if (lattice.k < 1 || lattice.layers < 1 ||
        lattice.n_sites() != (lattice.k + 1) * lattice.layers)
        throw ParameterError("embed_lattice: invalid lattice");

    Embedding emb;
    emb.k = lattice.k;
    emb.coordinates.resize(lattice.sites.size());

    const auto base = regular_simplex_vertices(lattice.k);
    // Layer n+1 is layer n inverted and scaled k-fold, so layer-n vertices
    // land on the facet centroids of layer n+1.
    double factor = 1.0;
    for (int n = 1; n <= lattice.layers; ++n) {
        for (int a = 1; a <= lattice.k + 1; ++a) {
            const int id = lattice.site_id(n, a);
            auto coords = base[a - 1];
            for (double& c : coords) c *= factor;
            emb.coordinates[id - 1] = std::move(coords);
        }
        factor *= -double(lattice.k);
    }
    return emb;
}

std::string lattice_to_json(const SimplexLattice& lattice, const Embedding* embedding) {
    nlohmann::ordered_json j;
    j["k"] = lattice.k;
    j["layers"] = lattice.layers;
    j["alpha"] = lattice.alpha;
    j["sites"] = nlohmann::ordered_json::array();
    for (const Site& s : lattice.sites)
        j["sites"].push_back({{"id", s.id}, {"layer", s.layer}, {"local", s.local}});
    j["bonds"] = nlohmann::ordered_json::array();
    for (const Bond& b : lattice.bonds)
        j["bonds"].push_back({{"i", b.i}, {"j", b.j}, {"coupling", b.coupling}});
    if (embedding) {
        nlohmann::ordered_json e;
        for (const Site& s : lattice.sites)
            e[std::to_string(s.id)] = embedding->coordinates[s.id - 1];
        j["embedding"] = std::move(e);
    }
    if (!lattice.warnings.empty()) j["warnings"] = lattice.warnings;
    return j.dump(2);
}

}  // namespace matryoshka
