#pragma once

#include <string>
#include <vector>

namespace matryoshka {

struct Site {
    int id = 0;     // 1-based
    int layer = 0;  // 1..layers
    int local = 0;  // 1..k+1 within the layer
};

struct Bond {
    int i = 0;  // i < j, both 1-based site ids
    int j = 0;
    double coupling = 0.0;
};

// Nested k-simplex lattice. Layer 1 is fully connected at coupling 1; a site
// with local index a in layer n+1 couples to every layer-n site with local
// index b != a, at strength sqrt((k+1)!) * alpha^(n-1/2). Outer layers carry
// no intra-layer bonds.
struct SimplexLattice {
    int k = 0;
    int layers = 0;
    double alpha = 0.0;
    std::vector<Site> sites;
    std::vector<Bond> bonds;                 // sorted by (i, j)
    std::vector<std::string> warnings;

    int n_sites() const { return static_cast<int>(sites.size()); }
    int site_id(int layer, int local) const { return (k + 1) * (layer - 1) + local; }
};

// Coordinates per site, layer-1 circumradius normalized to 1. Layer n+1 is
// the layer-n simplex inverted and blown up k-fold, so each layer-n vertex
// sits at the centroid of its adjacent layer-(n+1) facet.
struct Embedding {
    int k = 0;
    std::vector<std::vector<double>> coordinates;  // [site id - 1][0..k-1]
};

// Coupling between layers n and n+1, n = 1..layers-1.
double interlayer_coupling(int k, int n, double alpha);

SimplexLattice build_lattice(int k, int layers, double alpha);

Embedding embed_lattice(const SimplexLattice& lattice);

// Vertices of the unit-circumradius regular k-simplex centered at the origin.
std::vector<std::vector<double>> regular_simplex_vertices(int k);

std::string lattice_to_json(const SimplexLattice& lattice, const Embedding* embedding = nullptr);

}  // namespace matryoshka
