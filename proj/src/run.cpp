#include "crystalchain/run.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "crystalchain/format.hpp"

namespace crystalchain {

std::string_view to_string(ModelKind kind) { return kind == ModelKind::Crystal ? "crystal" : "hamming"; }

ModelKind parse_model_kind(std::string_view name) {
    if (name == "crystal") return ModelKind::Crystal;
    if (name == "hamming") return ModelKind::Hamming;
    throw std::invalid_argument("model must be 'crystal' or 'hamming', got \"" + std::string(name) + "\"");
}

Horizon Horizon::parse(std::string_view text) {
    if (text == "auto") return {Kind::Auto, 0.0};
    if (text == "infinite" || text == "inf") return {Kind::Infinite, 0.0};
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(std::string(text), &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || used == 0)
        throw std::invalid_argument("horizon must be a number, 'auto' or 'infinite', got \"" + std::string(text) + "\"");
    if (!(value > 0) || !std::isfinite(value)) throw std::invalid_argument("explicit horizon must be positive and finite");
    return {Kind::Explicit, value};
}

nlohmann::ordered_json Horizon::to_json() const {
    switch (kind) {
        case Kind::Auto: return "auto";
        case Kind::Infinite: return "infinite";
        case Kind::Explicit: return value;
    }
    return nullptr;
}

Horizon Horizon::from_json(const nlohmann::ordered_json& j) {
    if (j.is_number()) {
        const double v = j.get<double>();
        if (!(v > 0) || !std::isfinite(v)) throw std::invalid_argument("explicit horizon must be positive and finite");
        return {Kind::Explicit, v};
    }
    if (j.is_string()) return parse(j.get<std::string>());
    throw std::invalid_argument("horizon must be a number or a string");
}

void RunConfig::validate() const {
    check_chain_length(n, max_n);
    const SpinWord word = SpinWord::parse(initial);
    if (word.size() != n)
        throw std::invalid_argument("initial word \"" + initial + "\" has length " + std::to_string(word.size()) +
                                    ", expected " + std::to_string(n));
    check_finite(couplings);
    if (horizon.kind == Horizon::Kind::Explicit && !(horizon.value > 0))
        throw std::invalid_argument("explicit horizon must be positive");
}

RunConfig config_from_json(const nlohmann::ordered_json& j, RunConfig base) {
    if (!j.is_object()) throw std::invalid_argument("configuration must be a JSON object");
    try {
        if (j.contains("n")) base.n = j.at("n").get<int>();
        if (j.contains("initial")) base.initial = j.at("initial").get<std::string>();
        if (j.contains("model")) base.model = parse_model_kind(j.at("model").get<std::string>());
        if (j.contains("couplings")) {
            for (const auto& [key, value] : j.at("couplings").items())
                base.couplings[parse_coupling(key)] = value.get<double>();
        }
        if (j.contains("horizon")) base.horizon = Horizon::from_json(j.at("horizon"));
        if (j.contains("include_self")) base.include_self = j.at("include_self").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad configuration value: ") + e.what());
    }
    return base;
}

nlohmann::ordered_json config_json(const RunConfig& config) {
    nlohmann::ordered_json j;
    j["n"] = config.n;
    j["initial"] = SpinWord::parse(config.initial).str();
    j["model"] = to_string(config.model);
    auto& c = j["couplings"];
    c["mu0"] = config.couplings.mu0;
    c["eps"] = config.couplings.eps;
    c["gamma"] = config.couplings.gamma;
    c["delta"] = config.couplings.delta;
    c["eta"] = config.couplings.eta;
    c["beta"] = config.couplings.beta;
    j["horizon"] = config.horizon.to_json();
    j["include_self"] = config.include_self;
    return j;
}

RunConfig preset(std::string_view figure) {
    RunConfig c;
    c.horizon = {Horizon::Kind::Auto, 0.0};
    c.include_self = true;
    if (figure == "fig1") {
        c.n = 3;
        c.initial = "RRY";
        c.model = ModelKind::Hamming;
        c.couplings = {1.0, 0.0, 0.0, 0.0, 0.0, 0.5};
    } else if (figure == "fig2") {
        c.n = 3;
        c.initial = "RRY";
        c.model = ModelKind::Crystal;
        c.couplings = {1.0, 0.1, 0.3, 0.3, 0.0, 0.0};
    } else if (figure == "fig3") {
        c.n = 4;
        c.initial = "YYRY";
        c.model = ModelKind::Crystal;
        c.couplings = {1.0, 0.1, 0.5, 0.5, 0.5, 0.0};
    } else if (figure == "fig4") {
        c.n = 6;
        c.initial = "RYRYRY";
        c.model = ModelKind::Crystal;
        c.couplings = {1.0, 0.1, 0.5, 0.5, 0.5, 0.0};
    } else {
        throw std::invalid_argument("unknown figure \"" + std::string(figure) + "\" (expected fig1..fig4)");
    }
    return c;
}

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3", "fig4"}; }

SymbolicHamiltonian build_symbolic(const RunConfig& config, const BasisMap& basis) {
    return config.model == ModelKind::Crystal ? build_model(basis, BuildOptions{config.max_n, std::nullopt, nullptr})
                                              : build_hamming(basis, true);
}

RunResult execute(const RunConfig& config, const SymbolicHamiltonian* shared) {
    config.validate();
    RunResult result{config, enumerate_basis(config.n, config.max_n), {}, 0.0, {}, {}, std::nullopt, {}, {}};
    const SpinWord word = SpinWord::parse(config.initial);
    const std::size_t initial = result.basis.index_of(word);

    std::optional<SymbolicHamiltonian> own;
    if (!shared || shared->chain_length() != config.n) {
        own = build_symbolic(config, result.basis);
        shared = &*own;
    }
    const Eigen::MatrixXd h = evaluate<double>(*shared, config.couplings);
    const SpectralDecomposition<double> spec = eigendecompose(h);

    switch (config.horizon.kind) {
        case Horizon::Kind::Explicit:
            result.resolved_T = config.horizon.value;
            result.profile = time_averaged_profile(spec, initial, result.resolved_T);
            break;
        case Horizon::Kind::Auto:
            result.resolved_T = find_stable_T(spec, initial, config.stable);
            result.profile = time_averaged_profile(spec, initial, result.resolved_T);
            break;
        case Horizon::Kind::Infinite:
            result.resolved_T = std::numeric_limits<double>::infinity();
            result.profile = infinite_time_average(spec, initial);
            break;
    }

    result.ranked = rank_order(result.profile, config.include_self);
    try {
        ModelComparison cmp = compare_models(result.ranked);
        result.fits = {cmp.yule, cmp.zipf, fit_refine(result.ranked, cmp.yule)};
        result.comparison = std::move(cmp);
    } catch (const FitError& e) {
        result.notes.push_back(std::string("fit skipped: ") + e.what());
    }
    result.plateaux = plateaux_report(result.ranked, result.basis, word);
    return result;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

nlohmann::ordered_json manifest_json(const RunResult& result, std::string_view timestamp) {
    nlohmann::ordered_json j = config_json(result.config);
    if (std::isfinite(result.resolved_T))
        j["resolved_T"] = result.resolved_T;
    else
        j["resolved_T"] = "infinite";
    auto& fits = j["fits"] = nlohmann::ordered_json::array();
    for (const FitResult& f : result.fits) fits.push_back(fit_json(f));
    if (result.comparison) j["zipf_yule_sse_ratio"] = result.comparison->sse_ratio;
    auto& notes = j["notes"] = nlohmann::ordered_json::array();
    notes.push_back("hbar = 1; energies in units of mu0, times in units of 1/mu0");
    if (result.config.horizon.kind == Horizon::Kind::Auto) {
        std::ostringstream os;
        os << "horizon from stable-T search: start " << format_double(result.config.stable.start) << ", growth "
           << format_double(result.config.stable.growth) << ", max-norm tolerance "
           << format_double(result.config.stable.rel_tol);
        notes.push_back(os.str());
    }
    notes.push_back(result.config.include_self ? "ranking includes the initial state"
                                               : "ranking excludes the initial state");
    for (const std::string& note : result.notes) notes.push_back(note);
    j["version"] = kVersion;
    j["timestamp"] = timestamp;
    return j;
}

namespace {

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

}  // namespace

void write_run(const RunResult& result, const std::filesystem::path& dir, std::string_view timestamp) {
    std::filesystem::create_directories(dir);
    write_file(dir / "profile.csv", profile_csv(result.profile, result.basis));
    write_file(dir / "ranked.csv", ranked_csv(result.ranked, result.basis));
    write_file(dir / "plot.txt", plot_text(result.ranked));
    nlohmann::ordered_json fits = nlohmann::ordered_json::array();
    for (const FitResult& f : result.fits) fits.push_back(fit_json(f));
    write_file(dir / "fits.json", fits.dump(2) + "\n");
    write_file(dir / "plateaux.json", plateaux_json(result.plateaux).dump(2) + "\n");
    write_file(dir / "manifest.json", manifest_json(result, timestamp).dump(2) + "\n");
}

// ---------------------------------------------------------------------------

SweepAxis SweepAxis::parse(std::string_view text) {
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("grid axis needs '=': \"" + std::string(text) + "\"");
    SweepAxis axis;
    auto split = [](std::string_view s) {
        std::vector<std::string> out;
        std::size_t start = 0;
        while (start <= s.size()) {
            const std::size_t end = s.find(',', start);
            std::string piece(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
            if (!piece.empty()) out.push_back(piece);
            if (end == std::string_view::npos) break;
            start = end + 1;
        }
        return out;
    };
    for (const std::string& name : split(text.substr(0, eq))) axis.tied.push_back(parse_coupling(name));
    if (axis.tied.empty()) throw std::invalid_argument("grid axis names no coupling");
    for (const std::string& v : split(text.substr(eq + 1))) {
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(v, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != v.size() || !std::isfinite(value))
            throw std::invalid_argument("bad grid value \"" + v + "\"");
        axis.values.push_back(value);
    }
    return axis;
}

std::vector<CouplingValues> sweep_grid(const CouplingValues& base, const std::vector<SweepAxis>& axes) {
    if (axes.empty()) return {};
    std::vector<CouplingValues> points{base};
    for (const SweepAxis& axis : axes) {
        std::vector<CouplingValues> next;
        for (const CouplingValues& p : points)
            for (double v : axis.values) {
                CouplingValues q = p;
                for (Coupling c : axis.tied) q[c] = v;
                next.push_back(q);
            }
        points = std::move(next);
    }
    return points;
}

std::size_t SweepSummary::succeeded() const {
    std::size_t n = 0;
    for (const auto& p : points) n += p.ok;
    return n;
}

namespace {

std::string point_name(std::size_t id) {
    std::ostringstream os;
    os << "point_" << std::setw(4) << std::setfill('0') << id;
    return os.str();
}

}  // namespace

SweepSummary run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, const std::filesystem::path& out,
                       int jobs, std::string_view timestamp) {
    base.validate();
    const std::vector<CouplingValues> grid = sweep_grid(base.couplings, axes);
    SweepSummary summary;
    summary.points.resize(grid.size());
    for (std::size_t p = 0; p < grid.size(); ++p) {
        summary.points[p].id = p + 1;
        summary.points[p].config = base;
        summary.points[p].config.couplings = grid[p];
    }

    const BasisMap basis = enumerate_basis(base.n, base.max_n);
    const SymbolicHamiltonian sym = build_symbolic(base, basis);
    std::filesystem::create_directories(out);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t p = next++; p < summary.points.size(); p = next++) {
            SweepPointResult& point = summary.points[p];
            try {
                point.result = execute(point.config, &sym);
                write_run(*point.result, out / point_name(point.id), timestamp);
                point.ok = true;
            } catch (const std::exception& e) {
                point.error = e.what();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(grid.size())));
    {
        std::vector<std::jthread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }

    write_file(out / "summary.csv", sweep_summary_csv(summary));
    return summary;
}

std::string sweep_summary_csv(const SweepSummary& summary) {
    std::ostringstream os;
    os << "point,mu0,eps,gamma,delta,eta,beta,resolved_T,yule_a,yule_k,yule_b,yule_r2,zipf_yule_sse_ratio,"
          "plateaux_exact,status\n";
    for (const SweepPointResult& p : summary.points) {
        const CouplingValues& c = p.config.couplings;
        os << point_name(p.id) << ',' << format_double(c.mu0) << ',' << format_double(c.eps) << ','
           << format_double(c.gamma) << ',' << format_double(c.delta) << ',' << format_double(c.eta) << ','
           << format_double(c.beta) << ',';
        if (p.ok && p.result) {
            const RunResult& r = *p.result;
            os << format_double(r.resolved_T) << ',';
            if (r.comparison) {
                const FitResult& y = r.comparison->yule;
                os << format_double(y.a) << ',' << format_double(y.k) << ',' << format_double(y.b) << ','
                   << format_double(y.r2) << ',' << format_double(r.comparison->sse_ratio) << ',';
            } else {
                os << ",,,,,";
            }
            os << (r.plateaux.exact ? "true" : "false") << ",ok\n";
        } else {
            std::string err = p.error;
            for (char& ch : err)
                if (ch == ',' || ch == '\n') ch = ';';
            os << ",,,,,,,error: " << err << '\n';
        }
    }
    return os.str();
}

}  // namespace crystalchain
