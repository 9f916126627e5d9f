#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "matryoshka/entanglement.hpp"
#include "matryoshka/errors.hpp"
#include "matryoshka/lattice.hpp"
#include "matryoshka/operators.hpp"
#include "matryoshka/solvers.hpp"
#include "matryoshka/sw.hpp"
#include "matryoshka/young.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace matryoshka;

std::string fmt17(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

// Computation happens fully before anything is written, so failures never
// leave partial output files behind.
void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path, std::ios::binary);
    if (!os) throw ParameterError("cannot open output file: " + out_path);
    os << text;
}

int worker_count() {
    if (const char* env = std::getenv("MATRYOSHKA_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

// Runs jobs on a bounded pool; results keep the input order.
template <typename T>
std::vector<T> parallel_map(std::size_t count, const std::function<T(std::size_t)>& job) {
    std::vector<T> results(count);
    std::vector<std::exception_ptr> errors(count);
    const std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = job(i);
        return results;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> cursor{0};
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= count) return;
                try {
                    results[i] = job(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

std::vector<double> parse_alpha_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        const double v = std::stod(item, &pos);
        if (pos != item.size()) throw ParameterError("invalid alpha value: " + item);
        values.push_back(v);
    }
    if (values.empty()) throw ParameterError("empty alpha list");
    return values;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        values.push_back(std::stoi(item));
    }
    return values;
}

Cut parse_cut(const std::string& text) {
    if (text == "even-odd") return Cut::even_odd();
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string args = (colon == std::string::npos) ? "" : text.substr(colon + 1);
    if (kind == "concentric") {
        if (args.empty()) throw ParameterError("cut: concentric needs a boundary layer, e.g. concentric:1");
        return Cut::concentric(std::stoi(args));
    }
    if (kind == "radial") {
        if (args.empty()) throw ParameterError("cut: radial needs per-layer counts, e.g. radial:1,1");
        return Cut::radial(parse_int_list(args));
    }
    if (kind == "sites") {
        if (args.empty()) throw ParameterError("cut: sites needs a site list, e.g. sites:2,5");
        return Cut::explicit_sites(parse_int_list(args));
    }
    throw ParameterError("unknown cut descriptor: " + text +
                         " (expected even-odd, concentric:B, radial:m1,m2,..., or sites:...)");
}

SolverKind parse_solver(const std::string& text) {
    if (text == "auto") return SolverKind::Auto;
    if (text == "dense") return SolverKind::Dense;
    if (text == "iterative") return SolverKind::Iterative;
    throw ParameterError("solver must be auto, dense, or iterative");
}

struct CommonOptions {
    int k = 2;
    int layers = 1;
    std::string alpha_text = "0.01";
    std::string out_path;
    std::string format = "csv";
    std::string solver = "auto";
    double tol = 1e-10;
    std::uint64_t seed = 1;
};

int run_lattice(const CommonOptions& opt, bool embed) {
    const SimplexLattice lattice = build_lattice(opt.k, opt.layers, parse_alpha_list(opt.alpha_text).at(0));
    if (opt.format != "json") throw ParameterError("lattice export is JSON; use --format json");
    std::string text;
    if (embed) {
        const Embedding embedding = embed_lattice(lattice);
        text = lattice_to_json(lattice, &embedding);
    } else {
        text = lattice_to_json(lattice);
    }
    emit(text + "\n", opt.out_path);
    return 0;
}

int run_spectrum_simplex(const CommonOptions& opt, const std::string& variant, bool verify) {
    if (variant != "perm" && variant != "offdiag")
        throw ParameterError("variant must be perm or offdiag");
    const AnalyticSpectrum spec = (variant == "offdiag") ? offdiag_spectrum(opt.k)
                                                         : permutation_spectrum(opt.k);
    if (verify) verify_against_ed(opt.k);

    std::string text;
    if (opt.format == "json") {
        json j;
        j["k"] = opt.k;
        j["variant"] = variant;
        j["entries"] = json::array();
        for (const auto& e : spec.entries)
            j["entries"].push_back({{"diagram", partition_label(e.diagram)},
                                    {"content", e.content.empty() ? "" : partition_label(e.content)},
                                    {"eigenvalue", e.eigenvalue},
                                    {"degeneracy", e.degeneracy}});
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "diagram,content,eigenvalue,degeneracy\n";
        for (const auto& e : spec.entries)
            os << partition_label(e.diagram) << ',' << (e.content.empty() ? "" : partition_label(e.content))
               << ',' << fmt17(e.eigenvalue) << ',' << e.degeneracy << '\n';
        text = os.str();
    }
    emit(text, opt.out_path);
    return 0;
}

int run_spectrum_lattice(const CommonOptions& opt, int lowest, const std::string& sector_text) {
    const double alpha = parse_alpha_list(opt.alpha_text).at(0);
    const SimplexLattice lattice = build_lattice(opt.k, opt.layers, alpha);
    std::vector<int> content = sector_text.empty() ? std::vector<int>(opt.k + 1, opt.layers)
                                                   : parse_int_list(sector_text);
    const SectorBasis basis = enumerate_sector(opt.k, lattice.n_sites(), content);
    const SparseOperator h = hamiltonian(lattice, basis);

    SolverKind solver = parse_solver(opt.solver);
    if (solver == SolverKind::Auto)
        solver = (basis.dim() <= kDenseCap) ? SolverKind::Dense : SolverKind::Iterative;

    std::vector<double> eigenvalues;
    if (solver == SolverKind::Dense) {
        const Eigen::VectorXd evals = dense_spectrum(h).eigenvalues;
        const int count = std::min<int>(lowest, static_cast<int>(evals.size()));
        eigenvalues.assign(evals.data(), evals.data() + count);
    } else {
        if (lowest > 1)
            throw ParameterError("iterative solver reports only the lowest eigenvalue; use --solver dense");
        LanczosOptions lopts;
        lopts.tolerance = opt.tol;
        lopts.seed = opt.seed;
        eigenvalues.push_back(lanczos_lowest(h, lopts).eigenvalues(0));
    }

    std::string text;
    if (opt.format == "json") {
        json j;
        j["k"] = opt.k;
        j["layers"] = opt.layers;
        j["alpha"] = alpha;
        j["sector"] = content;
        j["dim"] = basis.dim();
        j["eigenvalues"] = eigenvalues;
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "index,eigenvalue\n";
        for (std::size_t i = 0; i < eigenvalues.size(); ++i) os << i << ',' << fmt17(eigenvalues[i]) << '\n';
        text = os.str();
    }
    emit(text, opt.out_path);
    return 0;
}

int run_sdrg(const CommonOptions& opt) {
    const std::vector<double> alphas = parse_alpha_list(opt.alpha_text);
    auto run_one = [&](std::size_t i) -> json {
        const SimplexLattice lattice = build_lattice(opt.k, opt.layers, alphas[i]);
        const std::vector<RGStepReport> steps = effective_flow(lattice);
        json j;
        j["k"] = opt.k;
        j["layers"] = opt.layers;
        j["alpha"] = alphas[i];
        j["steps"] = json::array();
        for (const RGStepReport& r : steps)
            j["steps"].push_back({{"layer", r.layer},
                                  {"J", r.j_link},
                                  {"J_tilde", r.renormalized_coupling},
                                  {"shift", r.constant_shift},
                                  {"deviation", r.deviation},
                                  {"gap", r.gap},
                                  {"warnings", r.warnings}});
        return j;
    };
    const auto runs = parallel_map<json>(alphas.size(), run_one);
    const std::string text =
        (runs.size() == 1) ? runs.front().dump(2) + "\n" : json{{"runs", runs}}.dump(2) + "\n";
    emit(text, opt.out_path);
    return 0;
}

struct EntropyRow {
    double alpha = 0.0;
    double entropy = 0.0;
    bool has_fidelity = false;
    double fidelity_value = 0.0;
    double energy = 0.0;
};

int run_entropy(const CommonOptions& opt, const std::string& cut_text, bool analytic,
                const std::string& sector_text, const std::string& log_base) {
    const std::vector<double> alphas = parse_alpha_list(opt.alpha_text);
    const Cut cut = parse_cut(cut_text);
    if (log_base != "natural" && log_base != "dim")
        throw ParameterError("log-base must be natural or dim");
    const double unit = (log_base == "dim") ? std::log(double(opt.k + 1)) : 1.0;

    auto run_one = [&](std::size_t i) -> EntropyRow {
        const double alpha = alphas[i];
        const SimplexLattice lattice = build_lattice(opt.k, opt.layers, alpha);
        EntropyRow row;
        row.alpha = alpha;

        if (analytic) {
            const StateVector state = analytic_ground_state(opt.k, opt.layers);
            // Per-layer cuts of the layer-product state have the closed-form
            // entropy; explicit site sets go through the Schmidt route.
            if (cut.kind == Cut::Kind::Explicit) {
                row.entropy = schmidt(state, cut.resolve(opt.k, opt.layers)).entropy;
            } else {
                std::vector<int> m(opt.layers, 0);
                switch (cut.kind) {
                    case Cut::Kind::Radial:
                        m = cut.m_per_layer;
                        break;
                    case Cut::Kind::EvenOdd:
                        m.assign(opt.layers, 1);
                        break;
                    case Cut::Kind::Concentric:
                        if (cut.boundary_layer < 1 || cut.boundary_layer >= opt.layers)
                            throw ParameterError("concentric cut: boundary layer must lie in 1..layers-1");
                        for (int n = 0; n < cut.boundary_layer; ++n) m[n] = opt.k + 1;
                        break;
                    default:
                        break;
                }
                row.entropy = radial_entropy(opt.k, opt.layers, m);
            }
            const SparseOperator h = hamiltonian(lattice, state.basis);
            row.energy = state.amplitudes.dot(h.apply(state.amplitudes));
            row.has_fidelity = true;
            row.fidelity_value = 1.0;
            return row;
        }

        std::vector<int> content = sector_text.empty() ? std::vector<int>(opt.k + 1, opt.layers)
                                                       : parse_int_list(sector_text);
        GroundStateOptions gopts;
        gopts.solver = parse_solver(opt.solver);
        gopts.tolerance = opt.tol;
        gopts.seed = opt.seed;
        const ExactGroundState ground = exact_ground_state(lattice, content, gopts);
        if (ground.degenerate)
            throw NumericalError("entropy: degenerate ground state (levels " + fmt17(ground.energy) +
                                 " and " + fmt17(ground.second_energy) + "); entropy is ill-defined");
        row.energy = ground.energy;
        row.entropy = schmidt(ground.state, cut.resolve(opt.k, opt.layers)).entropy;
        const bool balanced = (content == std::vector<int>(opt.k + 1, opt.layers));
        if (balanced) {
            row.has_fidelity = true;
            row.fidelity_value = fidelity(ground.state, analytic_ground_state(opt.k, opt.layers));
        }
        return row;
    };

    const auto rows = parallel_map<EntropyRow>(alphas.size(), run_one);

    std::string text;
    if (opt.format == "json") {
        json j = json::array();
        for (const EntropyRow& r : rows) {
            json row = {{"k", opt.k},        {"layers", opt.layers},         {"alpha", r.alpha},
                        {"cut", cut_text},   {"entropy", r.entropy / unit},  {"E0", r.energy}};
            row["fidelity"] = r.has_fidelity ? json(r.fidelity_value) : json(nullptr);
            j.push_back(row);
        }
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream os;
        os << "k,layers,alpha,cut,entropy,fidelity,E0\n";
        for (const EntropyRow& r : rows) {
            os << opt.k << ',' << opt.layers << ',' << fmt17(r.alpha) << ',' << cut_text << ','
               << fmt17(r.entropy / unit) << ',' << (r.has_fidelity ? fmt17(r.fidelity_value) : "") << ','
               << fmt17(r.energy) << '\n';
        }
        text = os.str();
    }
    emit(text, opt.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inhomogeneous SU(k+1) antiferromagnet on the nested k-simplex lattice"};
    app.require_subcommand(1);

    CommonOptions opt;
    bool embed = false, simplex = false, verify = false, analytic = false;
    std::string variant = "perm", cut_text = "even-odd", sector_text, log_base = "natural";
    int lowest = 1;

    auto add_common = [&](CLI::App* sub, bool with_alpha) {
        sub->add_option("--k", opt.k, "simplex dimension (local states = k+1)")->required();
        sub->add_option("--out", opt.out_path, "output file (stdout when omitted)");
        sub->add_option("--format", opt.format, "output format: csv or json");
        if (with_alpha) {
            sub->add_option("--layers", opt.layers, "number of layers");
            sub->add_option("--alpha", opt.alpha_text, "inhomogeneity parameter, or comma list for sweeps");
            sub->add_option("--solver", opt.solver, "auto, dense, or iterative");
            sub->add_option("--tol", opt.tol, "solver tolerance");
            sub->add_option("--seed", opt.seed, "iterative-solver seed");
        }
    };

    CLI::App* lattice_cmd = app.add_subcommand("lattice", "emit the lattice as JSON");
    add_common(lattice_cmd, true);
    lattice_cmd->add_flag("--embed", embed, "include the geometric embedding");

    CLI::App* spectrum_cmd = app.add_subcommand("spectrum", "single-simplex tables or lattice spectra");
    add_common(spectrum_cmd, true);
    spectrum_cmd->add_flag("--simplex", simplex, "analytic single-simplex spectrum");
    spectrum_cmd->add_option("--variant", variant, "perm or offdiag (with --simplex)");
    spectrum_cmd->add_flag("--verify", verify, "cross-check the analytic table against dense ED");
    spectrum_cmd->add_option("--lowest", lowest, "number of lowest eigenvalues to report");
    spectrum_cmd->add_option("--sector", sector_text, "color content, comma separated (default balanced)");

    CLI::App* sdrg_cmd = app.add_subcommand("sdrg", "layer-by-layer renormalization flow");
    add_common(sdrg_cmd, true);

    CLI::App* entropy_cmd = app.add_subcommand("entropy", "entanglement entropy and fidelity");
    add_common(entropy_cmd, true);
    entropy_cmd->add_option("--cut", cut_text, "even-odd, concentric:B, radial:m1,m2,..., or sites:...");
    entropy_cmd->add_flag("--analytic", analytic, "use the analytic layer-product state");
    entropy_cmd->add_option("--sector", sector_text, "color content, comma separated (default balanced)");
    entropy_cmd->add_option("--log-base", log_base, "entropy units: natural or dim (log base k+1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (lattice_cmd->parsed()) {
            if (opt.format == "csv") opt.format = "json";  // JSON is the lattice schema
            return run_lattice(opt, embed);
        }
        if (spectrum_cmd->parsed()) {
            if (simplex) return run_spectrum_simplex(opt, variant, verify);
            return run_spectrum_lattice(opt, lowest, sector_text);
        }
        if (sdrg_cmd->parsed()) {
            opt.format = "json";
            return run_sdrg(opt);
        }
        if (entropy_cmd->parsed()) return run_entropy(opt, cut_text, analytic, sector_text, log_base);
        return 2;
    } catch (const ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
