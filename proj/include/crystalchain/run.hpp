#pragma once

// Experiment runs: configuration, figure presets, manifests and sweeps.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crystalchain/analysis.hpp"
#include "crystalchain/crystal.hpp"
#include "crystalchain/dynamics.hpp"
#include "crystalchain/hamiltonian.hpp"

namespace crystalchain {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ModelKind { Crystal, Hamming };
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct Horizon {
    enum class Kind { Explicit, Auto, Infinite };
    Kind kind = Kind::Auto;
    double value = 0.0;

    /// "<t>", "auto" or "infinite".
    static Horizon parse(std::string_view text);
    nlohmann::ordered_json to_json() const;
    static Horizon from_json(const nlohmann::ordered_json& j);
};

struct RunConfig {
    int n = 3;
    std::string initial = "RRY";
    CouplingValues couplings{1.0, 0.1, 0.3, 0.3, 0.3, 0.5};
    ModelKind model = ModelKind::Crystal;
    Horizon horizon;
    // the initial state is ranked too; the self-transition is the top point
    bool include_self = true;
    int max_n = kDefaultMaxChainLength;
    StableHorizonOptions stable;

    /// Throws std::invalid_argument.
    void validate() const;
};

/// Reads the manifest field names; fields absent from `j` keep `base` values.
RunConfig config_from_json(const nlohmann::ordered_json& j, RunConfig base = {});
nlohmann::ordered_json config_json(const RunConfig& config);

/// fig1 .. fig4.
RunConfig preset(std::string_view figure);
std::vector<std::string> preset_names();

struct RunResult {
    RunConfig config;
    BasisMap basis;
    TransitionProfile<double> profile;
    /// Horizon used for the average; +inf for the infinite-time limit.
    double resolved_T = 0.0;
    RankedDistribution ranked;
    /// Log-space Yule and Zipf, then the linear-space Yule refinement.
    std::vector<FitResult> fits;
    std::optional<ModelComparison> comparison;
    PlateauxReport plateaux;
    std::vector<std::string> notes;
};

SymbolicHamiltonian build_symbolic(const RunConfig& config, const BasisMap& basis);

/// Throws ConvergenceError when the stable-horizon search hits its cap.
RunResult execute(const RunConfig& config, const SymbolicHamiltonian* shared = nullptr);

nlohmann::ordered_json manifest_json(const RunResult& result, std::string_view timestamp);
std::string utc_timestamp();

/// profile.csv, ranked.csv, plot.txt, fits.json, plateaux.json, manifest.json.
void write_run(const RunResult& result, const std::filesystem::path& dir, std::string_view timestamp);

// ---------------------------------------------------------------------------

/// A grid axis: couplings tied to one value per point, "eps,gamma=0.1,0.3".
struct SweepAxis {
    std::vector<Coupling> tied;
    std::vector<double> values;

    static SweepAxis parse(std::string_view text);
};

/// Cartesian product of the axes; no axes (or an axis without values) is empty.
std::vector<CouplingValues> sweep_grid(const CouplingValues& base, const std::vector<SweepAxis>& axes);

struct SweepPointResult {
    std::size_t id = 0;
    RunConfig config;
    bool ok = false;
    std::string error;
    std::optional<RunResult> result;
};

struct SweepSummary {
    std::vector<SweepPointResult> points;
    std::size_t succeeded() const;
};

/// Runs every grid point (up to `jobs` at once) into `out/point_NNNN` and
/// writes `out/summary.csv`.
SweepSummary run_sweep(const RunConfig& base, const std::vector<SweepAxis>& axes, const std::filesystem::path& out,
                       int jobs, std::string_view timestamp);

std::string sweep_summary_csv(const SweepSummary& summary);

}  // namespace crystalchain
