#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "matryoshka/basis.hpp"

namespace matryoshka {

// Weakly decreasing positive parts.
using Partition = std::vector<int>;

bool is_valid_partition(const Partition& p, int n);
std::vector<Partition> partitions_of(int n);
Partition conjugate_partition(const Partition& p);
std::string partition_label(const Partition& p);

// Number of standard Young tableaux of the given shape (hook length formula).
std::uint64_t standard_tableaux_count(const Partition& shape);

// Dimension of the GL(n_colors) irreducible of the given shape (hook content
// formula).
std::uint64_t gl_dimension(const Partition& shape, int n_colors);

// Number of semistandard tableaux of the given shape and content, counted by
// direct enumeration.
std::uint64_t kostka_number(const Partition& shape, const std::vector<int>& content);

// Eigenvalue of the sum of transpositions on the irreducible labeled by the
// diagram: (sum_rows l(l-1) - sum_cols l(l-1)) / 2.
double perm_eigenvalue(const Partition& diagram);

// Multiplicity of that eigenvalue in the (k+1)-site, (k+1)-color model:
// standard tableaux count times GL(k+1) dimension.
std::uint64_t perm_degeneracy(const Partition& diagram, int k);

struct SpectrumEntry {
    Partition diagram;
    std::vector<int> content;  // pattern, weakly decreasing; empty in the permutation variant
    double eigenvalue = 0.0;
    std::uint64_t degeneracy = 0;
};

struct AnalyticSpectrum {
    int k = 0;
    bool offdiag = false;
    std::vector<SpectrumEntry> entries;  // ascending eigenvalue

    std::uint64_t total_degeneracy() const;
    std::map<long long, std::uint64_t> levels() const;  // eigenvalue -> multiplicity
};

AnalyticSpectrum permutation_spectrum(int k);

// Content-resolved spectrum of the color-exchange Hamiltonian: for shape
// lambda and content pattern mu, eigenvalue perm_eigenvalue(lambda) minus the
// number of equal-color pairs, degeneracy f^lambda * K_{lambda,mu} * (number
// of color assignments realizing the pattern). k <= 6.
AnalyticSpectrum offdiag_spectrum(int k);

struct VerifyReport {
    bool ok = false;
    std::string detail;
};

// Cross-checks both analytic spectra against sector-wise dense
// diagonalization of the single-simplex operators; k <= 4. Throws
// NumericalError naming the offending (diagram, content) on mismatch.
VerifyReport verify_against_ed(int k);

// Young operator Q_tau P_tau applied to a reference configuration; valid
// for k+1 <= 4 sites. The tableau rows hold 1-based site numbers.
Eigen::VectorXd young_operator_state(const std::vector<std::vector<int>>& tableau,
                                     Code reference, int k, const SectorBasis& basis);

}  // namespace matryoshka
