#include "matryoshka/young.hpp"

#include <algorithm>
#include <cmath>
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

// Hook length of cell (r, c), 0-based.
int hook_length(const Partition& shape, const Partition& transpose, int r, int c) {
    return (shape[r] - c) + (transpose[c] - r) - 1;
}

long long round_to_int(double x) { return static_cast<long long>(std::llround(x)); }

std::string content_label(const std::vector<int>& content) {
    std::ostringstream os;
    for (std::size_t i = 0; i < content.size(); ++i) os << (i ? "+" : "") << content[i];
    return os.str();
}

}  // namespace

bool is_valid_partition(const Partition& p, int n) {
    if (p.empty()) return n == 0;
    int sum = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 1) return false;
        if (i > 0 && p[i] > p[i - 1]) return false;
        sum += p[i];
    }
    return sum == n;
}

std::vector<Partition> partitions_of(int n) {
    std::vector<Partition> result;
    Partition current;
    auto recurse = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            result.push_back(current);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            current.push_back(part);
            self(self, remaining - part, part);
            current.pop_back();
        }
    };
    recurse(recurse, n, n);
    return result;
}

Partition conjugate_partition(const Partition& p) {
    if (p.empty()) return {};
    Partition t(p[0], 0);
    for (int part : p)
        for (int c = 0; c < part; ++c) t[c]++;
    return t;
}

std::string partition_label(const Partition& p) {
    std::ostringstream os;
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "+" : "") << p[i];
    return os.str();
}

std::uint64_t standard_tableaux_count(const Partition& shape) {
    int n = std::accumulate(shape.begin(), shape.end(), 0);
    if (!is_valid_partition(shape, n) || n == 0)
        throw ParameterError("standard_tableaux_count: invalid partition");
    const Partition t = conjugate_partition(shape);
    std::uint64_t numerator = factorial_u64(n);
    std::uint64_t hooks = 1;
    for (std::size_t r = 0; r < shape.size(); ++r)
        for (int c = 0; c < shape[r]; ++c) hooks *= static_cast<std::uint64_t>(hook_length(shape, t, r, c));
    return numerator / hooks;
}

std::uint64_t gl_dimension(const Partition& shape, int n_colors) {
    int n = std::accumulate(shape.begin(), shape.end(), 0);
    if (!is_valid_partition(shape, n) || n == 0) throw ParameterError("gl_dimension: invalid partition");
    if (static_cast<int>(shape.size()) > n_colors) return 0;
    const Partition t = conjugate_partition(shape);
    std::uint64_t numerator = 1, hooks = 1;
    for (std::size_t r = 0; r < shape.size(); ++r) {
        for (int c = 0; c < shape[r]; ++c) {
            numerator *= static_cast<std::uint64_t>(n_colors + c - static_cast<int>(r));
            hooks *= static_cast<std::uint64_t>(hook_length(shape, t, r, c));
        }
    }
    return numerator / hooks;
}

std::uint64_t kostka_number(const Partition& shape, const std::vector<int>& content) {
    int n = std::accumulate(shape.begin(), shape.end(), 0);
    if (!is_valid_partition(shape, n)) throw ParameterError("kostka_number: invalid partition");
    int csum = std::accumulate(content.begin(), content.end(), 0);
    if (csum != n) throw ParameterError("kostka_number: content does not sum to |shape|");

    // Fill cells in row-reading order: rows weakly increase, columns strictly
    // increase, per-value counts fixed by the content.
    const int rows = static_cast<int>(shape.size());
    const int values = static_cast<int>(content.size());
    std::vector<std::vector<int>> cell(rows);
    for (int r = 0; r < rows; ++r) cell[r].assign(shape[r], -1);
    std::vector<int> remaining = content;
    std::uint64_t count = 0;

    auto recurse = [&](auto&& self, int r, int c) -> void {
        if (r == rows) {
            count++;
            return;
        }
        const int next_r = (c + 1 < shape[r]) ? r : r + 1;
        const int next_c = (c + 1 < shape[r]) ? c + 1 : 0;
        const int min_row = (c > 0) ? cell[r][c - 1] : 0;
        const int min_col = (r > 0 && c < shape[r - 1]) ? cell[r - 1][c] + 1 : 0;
        for (int v = std::max(min_row, min_col); v < values; ++v) {
            if (remaining[v] == 0) continue;
            remaining[v]--;
            cell[r][c] = v;
            self(self, next_r, next_c);
            remaining[v]++;
        }
    };
    recurse(recurse, 0, 0);
    return count;
}

double perm_eigenvalue(const Partition& diagram) {
    int n = std::accumulate(diagram.begin(), diagram.end(), 0);
    if (!is_valid_partition(diagram, n) || n == 0) throw ParameterError("perm_eigenvalue: invalid partition");
    const Partition t = conjugate_partition(diagram);
    double rows = 0.0, cols = 0.0;
    for (int l : diagram) rows += double(l) * (l - 1);
    for (int l : t) cols += double(l) * (l - 1);
    return 0.5 * (rows - cols);
}

std::uint64_t perm_degeneracy(const Partition& diagram, int k) {
    return standard_tableaux_count(diagram) * gl_dimension(diagram, k + 1);
}

std::uint64_t AnalyticSpectrum::total_degeneracy() const {
    std::uint64_t total = 0;
    for (const auto& e : entries) total += e.degeneracy;
    return total;
}

std::map<long long, std::uint64_t> AnalyticSpectrum::levels() const {
    std::map<long long, std::uint64_t> m;
    for (const auto& e : entries) m[round_to_int(e.eigenvalue)] += e.degeneracy;
    return m;
}

AnalyticSpectrum permutation_spectrum(int k) {
    if (k < 1) throw ParameterError("permutation_spectrum: k must be >= 1");
    AnalyticSpectrum spec;
    spec.k = k;
    for (const Partition& p : partitions_of(k + 1))
        spec.entries.push_back({p, {}, perm_eigenvalue(p), perm_degeneracy(p, k)});
    std::sort(spec.entries.begin(), spec.entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
        return std::tie(a.eigenvalue, a.diagram) < std::tie(b.eigenvalue, b.diagram);
    });
    return spec;
}

AnalyticSpectrum offdiag_spectrum(int k) {
    if (k < 1) throw ParameterError("offdiag_spectrum: k must be >= 1");
    if (k > 6) throw ParameterError("offdiag_spectrum: k > 6 not supported");
    AnalyticSpectrum spec;
    spec.k = k;
    spec.offdiag = true;
    const int n = k + 1;
    const auto shapes = partitions_of(n);
    for (const Partition& shape : shapes) {
        const std::uint64_t f = standard_tableaux_count(shape);
        for (const Partition& pattern : shapes) {
            if (static_cast<int>(pattern.size()) > n) continue;
            std::vector<int> content(pattern.begin(), pattern.end());
            content.resize(n, 0);
            const std::uint64_t kostka = kostka_number(shape, content);
            if (kostka == 0) continue;
            // Number of ways to hand the count pattern to actual colors.
            std::vector<int> mult(n + 1, 0);
            for (int c : content) mult[c]++;
            std::uint64_t assignments = factorial_u64(n);
            for (int m : mult) assignments /= factorial_u64(m);
            double pairs = 0.0;
            for (int c : content) pairs += 0.5 * double(c) * (c - 1);
            spec.entries.push_back(
                {shape, content, perm_eigenvalue(shape) - pairs, f * kostka * assignments});
        }
    }
    std::sort(spec.entries.begin(), spec.entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
        return std::tie(a.eigenvalue, a.diagram, a.content) < std::tie(b.eigenvalue, b.diagram, b.content);
    });
    return spec;
}

VerifyReport verify_against_ed(int k) {
    if (k < 1 || k > 4) throw ParameterError("verify_against_ed: k must be in 1..4");
    const int n = k + 1;
    std::ostringstream detail;

    for (bool offdiag : {false, true}) {
        const AnalyticSpectrum analytic = offdiag ? offdiag_spectrum(k) : permutation_spectrum(k);

        // Per-sector expected multiplicities, keyed by (content, eigenvalue).
        std::map<long long, std::uint64_t> numeric_levels;
        for (const auto& content : all_contents(k, n)) {
            const SectorBasis basis = enumerate_sector(k, n, content);
            SparseOperator op = permutation_hamiltonian(k, basis);
            double pairs = 0.0;
            for (int c : content) pairs += 0.5 * double(c) * (c - 1);

            std::map<long long, std::uint64_t> sector_numeric;
            const Eigen::VectorXd evals = dense_spectrum(op).eigenvalues;
            for (Eigen::Index i = 0; i < evals.size(); ++i) {
                const double shifted = offdiag ? evals(i) - pairs : evals(i);
                const long long rounded = round_to_int(shifted);
                if (std::abs(shifted - double(rounded)) > 1e-10)
                    throw NumericalError("verify_against_ed: non-integer eigenvalue in sector content=" +
                                         content_label(content));
                sector_numeric[rounded]++;
                numeric_levels[rounded]++;
            }

            std::map<long long, std::uint64_t> sector_expected;
            for (const Partition& shape : partitions_of(n)) {
                const std::uint64_t mult = standard_tableaux_count(shape) * kostka_number(shape, content);
                if (mult == 0) continue;
                const double eig = perm_eigenvalue(shape) - (offdiag ? pairs : 0.0);
                sector_expected[round_to_int(eig)] += mult;
            }
            if (sector_numeric != sector_expected) {
                std::ostringstream os;
                os << "verify_against_ed: mismatch in sector content=" << content_label(content)
                   << " (" << (offdiag ? "off-diagonal" : "permutation") << " variant); offending diagrams:";
                for (const Partition& shape : partitions_of(n)) {
                    const double eig = perm_eigenvalue(shape) - (offdiag ? pairs : 0.0);
                    const long long key = round_to_int(eig);
                    if (sector_numeric[key] != sector_expected[key])
                        os << " (" << partition_label(shape) << ", " << content_label(content) << ")";
                }
                throw NumericalError(os.str());
            }
        }

        const auto analytic_levels = analytic.levels();
        if (numeric_levels != analytic_levels)
            throw NumericalError(std::string("verify_against_ed: aggregated ") +
                                 (offdiag ? "off-diagonal" : "permutation") +
                                 " spectrum disagrees with the analytic table");

        detail << (offdiag ? "off-diagonal" : "permutation") << " k=" << k << ":";
        for (const auto& [eig, deg] : analytic_levels) detail << ' ' << eig << ":" << deg;
        detail << '\n';
    }

    return {true, detail.str()};
}

Eigen::VectorXd young_operator_state(const std::vector<std::vector<int>>& tableau, Code reference,
                                     int k, const SectorBasis& basis) {
    const int n = basis.n_sites;
    if (n != k + 1) throw ParameterError("young_operator_state: basis must have k+1 sites");
    if (n > 4) throw ParameterError("young_operator_state: supported for up to 4 sites");

    // Standard tableau checks: shape weakly decreasing, entries 1..n once,
    // rows and columns strictly increasing.
    std::vector<char> seen(n + 1, 0);
    for (std::size_t r = 0; r < tableau.size(); ++r) {
        if (tableau[r].empty()) throw ParameterError("young_operator_state: empty row");
        if (r > 0 && tableau[r].size() > tableau[r - 1].size())
            throw ParameterError("young_operator_state: row lengths must weakly decrease");
        for (std::size_t c = 0; c < tableau[r].size(); ++c) {
            const int entry = tableau[r][c];
            if (entry < 1 || entry > n || seen[entry])
                throw ParameterError("young_operator_state: entries must be 1..n without repeats");
            seen[entry] = 1;
            if (c > 0 && tableau[r][c] <= tableau[r][c - 1])
                throw ParameterError("young_operator_state: rows must increase");
            if (r > 0 && c < tableau[r - 1].size() && tableau[r][c] <= tableau[r - 1][c])
                throw ParameterError("young_operator_state: columns must increase");
        }
    }
    for (int s = 1; s <= n; ++s)
        if (!seen[s]) throw ParameterError("young_operator_state: entries must cover 1..n");

    using Component = std::map<Code, double>;
    auto apply_site_permutation = [&](const Component& in, const std::vector<int>& sites,
                                      const std::vector<int>& images, double sign) {
        Component out;
        for (const auto& [code, amp] : in) {
            std::int64_t mapped = static_cast<std::int64_t>(code);
            for (std::size_t t = 0; t < sites.size(); ++t) {
                // Color of site sites[t] moves to site images[t].
                const int color = color_at(code, sites[t], k);
                const auto weight = static_cast<std::int64_t>(pow_u64(k + 1, images[t] - 1));
                const int old_color = color_at(static_cast<Code>(mapped), images[t], k);
                mapped += static_cast<std::int64_t>(color - old_color) * weight;
            }
            out[static_cast<Code>(mapped)] += sign * amp;
        }
        return out;
    };

    auto group_sum = [&](const Component& in, const std::vector<int>& sites, bool signed_sum) {
        Component out;
        std::vector<int> images = sites;
        std::sort(images.begin(), images.end());
        do {
            // Parity from inversion count relative to the sorted order.
            int inversions = 0;
            for (std::size_t a = 0; a < images.size(); ++a)
                for (std::size_t b = a + 1; b < images.size(); ++b)
                    if (images[a] > images[b]) inversions++;
            const double sign = (signed_sum && (inversions % 2)) ? -1.0 : 1.0;
            Component permuted = apply_site_permutation(in, sites, images, sign);
            for (const auto& [code, amp] : permuted) out[code] += amp;
        } while (std::next_permutation(images.begin(), images.end()));
        return out;
    };

    Component acc{{reference, 1.0}};
    for (const auto& row : tableau)
        if (row.size() > 1) acc = group_sum(acc, row, false);
    const Partition shape = [&] {
        Partition s;
        for (const auto& row : tableau) s.push_back(static_cast<int>(row.size()));
        return s;
    }();
    const Partition t = conjugate_partition(shape);
    for (std::size_t c = 0; c < t.size(); ++c) {
        if (t[c] < 2) continue;
        std::vector<int> column;
        for (int r = 0; r < t[c]; ++r) column.push_back(tableau[r][c]);
        acc = group_sum(acc, column, true);
    }

    Eigen::VectorXd v = Eigen::VectorXd::Zero(basis.dim());
    for (const auto& [code, amp] : acc) {
        if (amp == 0.0) continue;
        v(static_cast<Eigen::Index>(basis.index_of(code))) += amp;
    }
    return v;
}

}  // namespace matryoshka
