// crystalchain: command-line front end.
//
// Exit codes: 0 success, 2 argument error, 3 dynamics failure, 4 fit failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crystalchain/analysis.hpp"
#include "crystalchain/crystal.hpp"
#include "crystalchain/format.hpp"
#include "crystalchain/hamiltonian.hpp"
#include "crystalchain/run.hpp"

namespace cc = crystalchain;

namespace {

constexpr int kArgumentError = 2;
constexpr int kDynamicsError = 3;
constexpr int kFitError = 4;

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::invalid_argument("cannot read " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

/// Flags shared by the run-style subcommands; applied on top of --config.
struct RunFlags {
    std::string config_file;
    int n = 0;
    std::string initial;
    std::string model;
    std::string horizon;
    bool include_self = false;
    std::string out;
    double couplings[cc::kCouplingCount] = {};
    CLI::Option* n_opt = nullptr;
    CLI::Option* initial_opt = nullptr;
    CLI::Option* model_opt = nullptr;
    CLI::Option* horizon_opt = nullptr;
    CLI::Option* include_self_opt = nullptr;
    CLI::Option* coupling_opts[cc::kCouplingCount] = {};

    void add_to(CLI::App& app, bool run_flags) {
        app.add_option("--config", config_file, "JSON configuration (manifest field names); flags override it");
        n_opt = app.add_option("--n", n, "chain length");
        model_opt = app.add_option("--model", model, "crystal | hamming");
        for (cc::Coupling c : cc::kAllCouplings) {
            std::string name(cc::to_string(c));
            for (char& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            coupling_opts[static_cast<std::size_t>(c)] =
                app.add_option("--" + name, couplings[static_cast<std::size_t>(c)], "coupling " + name + " (units of mu0)");
        }
        if (!run_flags) return;
        initial_opt = app.add_option("--initial", initial, "initial word over R/Y (aliases 1/0, +/-)");
        horizon_opt = app.add_option("--horizon", horizon, "averaging horizon: <t> | auto | infinite");
        include_self_opt = app.add_flag("--include-self,!--exclude-self", include_self,
                                          "keep (default) or drop the initial state in the ranking");
        app.add_option("--out", out, "output directory");
    }

    cc::RunConfig resolve(cc::RunConfig base) const {
        if (!config_file.empty())
            base = cc::config_from_json(nlohmann::ordered_json::parse(read_file(config_file)), base);
        if (n_opt && n_opt->count()) base.n = n;
        if (initial_opt && initial_opt->count()) base.initial = initial;
        if (model_opt && model_opt->count()) base.model = cc::parse_model_kind(model);
        if (horizon_opt && horizon_opt->count()) base.horizon = cc::Horizon::parse(horizon);
        if (include_self_opt && include_self_opt->count()) base.include_self = include_self;
        for (cc::Coupling c : cc::kAllCouplings)
            if (coupling_opts[static_cast<std::size_t>(c)]->count())
                base.couplings[c] = couplings[static_cast<std::size_t>(c)];
        // a config file or --n without --initial: default to the all-R word
        if (static_cast<int>(base.initial.size()) != base.n && !(initial_opt && initial_opt->count()) &&
            base.n >= cc::kMinChainLength)
            base.initial = std::string(static_cast<std::size_t>(base.n), 'R');
        base.validate();
        return base;
    }
};

void print_numeric(const Eigen::MatrixXd& h) {
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
        for (Eigen::Index c = 0; c < h.cols(); ++c) std::cout << (c ? " " : "") << cc::format_double(h(r, c));
        std::cout << '\n';
    }
}

void print_summary(const cc::RunResult& r, std::ostream& os) {
    os << "n=" << r.config.n << " initial=" << cc::SpinWord::parse(r.config.initial).str()
       << " model=" << cc::to_string(r.config.model) << " T=" << cc::format_double(r.resolved_T) << '\n';
    for (const cc::FitResult& f : r.fits)
        os << "  " << cc::to_string(f.model) << (f.fit_space == cc::FitSpace::Log ? " (log)" : " (linear)")
           << ": a=" << cc::format_double(f.a) << " k=" << cc::format_double(f.k) << " b=" << cc::format_double(f.b)
           << " r2=" << cc::format_double(f.r2) << '\n';
    if (r.comparison) os << "  zipf/yule sse ratio: " << cc::format_double(r.comparison->sse_ratio) << '\n';
    os << "  plateaux: exact=" << (r.plateaux.exact ? "yes" : "no")
       << " grouping_consistent=" << (r.plateaux.grouping_consistent ? "yes" : "no")
       << " max_spread=" << cc::format_double(r.plateaux.max_spread) << '\n';
    for (const std::string& note : r.notes) os << "  note: " << note << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crystal-basis spin-chain mutation model: basis, Hamiltonians, time-averaged profiles and rank fits"};
    app.set_version_flag("--version", std::string(cc::kVersion));
    app.require_subcommand(1);

    // basis
    int basis_n = 0;
    auto* basis_cmd = app.add_subcommand("basis", "print the canonical basis");
    basis_cmd->add_option("--n", basis_n, "chain length")->required();

    // hamiltonian
    RunFlags ham_flags;
    bool symbolic = false;
    bool no_field = false;
    auto* ham_cmd = app.add_subcommand("hamiltonian", "dump the symbolic or evaluated Hamiltonian");
    ham_flags.add_to(*ham_cmd, false);
    ham_cmd->add_flag("--symbolic", symbolic, "integer coefficient dump instead of the numeric matrix");
    ham_cmd->add_flag("--no-field", no_field, "hamming model without the MU0 diagonal");

    // profile
    RunFlags profile_flags;
    auto* profile_cmd = app.add_subcommand("profile", "time-averaged transition probabilities from one initial word");
    profile_flags.add_to(*profile_cmd, true);

    // fit
    std::string fit_input;
    std::string fit_model = "both";
    bool fit_refine = false;
    auto* fit_cmd = app.add_subcommand("fit", "fit a ranked CSV with Yule and/or Zipf laws");
    fit_cmd->add_option("input", fit_input, "ranked CSV (rank,index,word,value)")->required();
    fit_cmd->add_option("--model", fit_model, "yule | zipf | both");
    fit_cmd->add_flag("--refine", fit_refine, "add linear-space refinements of each fit");

    // reproduce
    std::string figure;
    std::string reproduce_out;
    auto* reproduce_cmd = app.add_subcommand("reproduce", "run a figure preset");
    reproduce_cmd->add_option("figure", figure, "fig1 | fig2 | fig3 | fig4")->required();
    reproduce_cmd->add_option("--out", reproduce_out, "output directory (default: <figure>)");

    // sweep
    RunFlags sweep_flags;
    std::vector<std::string> grid;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto* sweep_cmd = app.add_subcommand("sweep", "run a coupling grid");
    sweep_flags.add_to(*sweep_cmd, true);
    sweep_cmd->add_option("--grid", grid, "axis 'name[,name...]=v1,v2,...'; tied names share each value");
    sweep_cmd->add_option("--jobs", jobs, "concurrent points");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kArgumentError;
    }

    try {
        if (*basis_cmd) {
            const cc::BasisMap basis = cc::enumerate_basis(basis_n);
            for (std::size_t i = 0; i < basis.size(); ++i)
                std::cout << i + 1 << ' ' << basis[i].word.str() << ' ' << cc::format_labels(basis[i].labels) << '\n';
            return 0;
        }

        if (*ham_cmd) {
            const cc::RunConfig config = ham_flags.resolve({});
            const cc::BasisMap basis = cc::enumerate_basis(config.n, config.max_n);
            const cc::SymbolicHamiltonian sym = config.model == cc::ModelKind::Crystal
                                                    ? cc::build_model(basis)
                                                    : cc::build_hamming(basis, !no_field);
            if (symbolic)
                std::cout << cc::symbolic_dump(sym);
            else
                print_numeric(cc::evaluate<double>(sym, config.couplings));
            return 0;
        }

        if (*profile_cmd) {
            const cc::RunConfig config = profile_flags.resolve({});
            const cc::RunResult result = cc::execute(config);
            if (profile_flags.out.empty()) {
                std::cout << cc::profile_csv(result.profile, result.basis);
                print_summary(result, std::cerr);
            } else {
                cc::write_run(result, profile_flags.out, cc::utc_timestamp());
                print_summary(result, std::cout);
            }
            return 0;
        }

        if (*fit_cmd) {
            const cc::RankedDistribution ranked = cc::parse_ranked_csv(read_file(fit_input));
            std::vector<cc::FitModel> models;
            if (fit_model == "both") {
                models = {cc::FitModel::Yule, cc::FitModel::Zipf};
            } else {
                models = {cc::parse_fit_model(fit_model)};
            }
            nlohmann::ordered_json out = nlohmann::ordered_json::array();
            for (cc::FitModel m : models) {
                const cc::FitResult fit = cc::fit_log_linear(ranked, m);
                out.push_back(cc::fit_json(fit));
                if (fit_refine) out.push_back(cc::fit_json(cc::fit_refine(ranked, fit)));
            }
            std::cout << out.dump(2) << '\n';
            return 0;
        }

        if (*reproduce_cmd) {
            const cc::RunConfig config = cc::preset(figure);
            const cc::RunResult result = cc::execute(config);
            const std::filesystem::path out = reproduce_out.empty() ? std::filesystem::path(figure) : std::filesystem::path(reproduce_out);
            cc::write_run(result, out, cc::utc_timestamp());
            print_summary(result, std::cout);
            std::cout << "wrote " << out.string() << '\n';
            return 0;
        }

        if (*sweep_cmd) {
            const cc::RunConfig config = sweep_flags.resolve({});
            std::vector<cc::SweepAxis> axes;
            for (const std::string& g : grid) axes.push_back(cc::SweepAxis::parse(g));
            const std::filesystem::path out = sweep_flags.out.empty() ? std::filesystem::path("sweep") : std::filesystem::path(sweep_flags.out);
            const cc::SweepSummary summary = cc::run_sweep(config, axes, out, jobs, cc::utc_timestamp());
            std::cout << summary.points.size() << " points, " << summary.succeeded() << " succeeded; summary in "
                      << (out / "summary.csv").string() << '\n';
            for (const auto& p : summary.points)
                if (!p.ok) std::cerr << "point " << p.id << " failed: " << p.error << '\n';
            return summary.points.empty() || summary.succeeded() > 0 ? 0 : kDynamicsError;
        }
    } catch (const cc::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDynamicsError;
    } catch (const cc::FitError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFitError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kArgumentError;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kArgumentError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kArgumentError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
