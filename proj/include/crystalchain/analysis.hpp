#pragma once

// Rank ordering, Yule/Zipf fits and Hamming-distance plateaux diagnostics.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crystalchain/crystal.hpp"
#include "crystalchain/dynamics.hpp"

namespace crystalchain {

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RankedEntry {
    int rank = 0;  // 1-based
    std::size_t index = 0;
    double value = 0.0;
};

struct RankedDistribution {
    std::vector<RankedEntry> entries;
    std::size_t initial = 0;
    bool include_self = false;

    std::size_t size() const { return entries.size(); }
};

/// Descending by value, ties by basis index.
RankedDistribution rank_order(const TransitionProfile<double>& profile, bool include_self = false);

enum class FitModel { Yule, Zipf };
enum class FitSpace { Log, Linear };

std::string_view to_string(FitModel model);
FitModel parse_fit_model(std::string_view name);

/// f(R) = a R^k b^R; Zipf has b = 1.
struct FitResult {
    FitModel model = FitModel::Yule;
    double a = 1.0;
    double k = 0.0;
    double b = 1.0;
    FitSpace fit_space = FitSpace::Log;
    double sse = 0.0;         // in fit_space
    double sse_log = 0.0;     // sum (log f - log model)^2
    double sse_linear = 0.0;  // sum (f - model)^2
    double r2 = 0.0;          // linear space
    std::size_t points_used = 0;
    std::size_t points_excluded = 0;
    /// False when a refinement diverged and the seed was returned.
    bool converged = true;

    double predict(double rank) const;
};

/// Least squares on log f = log a + k log R + R log b over positive values.
/// Throws FitError with fewer than 4 (Yule) or 3 (Zipf) positive points.
FitResult fit_log_linear(const RankedDistribution& ranked, FitModel model);

/// Damped Gauss-Newton (Levenberg-Marquardt) on the linear-space residuals,
/// started from `initial`. Never returns a larger linear sse than the seed.
FitResult fit_refine(const RankedDistribution& ranked, const FitResult& initial);

struct ModelComparison {
    FitResult yule;
    FitResult zipf;
    /// zipf.sse_log / yule.sse_log; 1 when both vanish.
    double sse_ratio = 1.0;
};

ModelComparison compare_models(const RankedDistribution& ranked);

struct PlateauxGroup {
    int distance = 0;
    std::vector<std::size_t> states;
    std::vector<double> values;
    double mean = 0.0;
    double spread = 0.0;  // max - min
};

struct PlateauxReport {
    /// One group per Hamming distance 0..N, possibly empty.
    std::vector<PlateauxGroup> groups;
    double max_spread = 0.0;
    /// Every group is flat within the tolerance.
    bool exact = false;
    /// Ranking never interleaves two groups (within the tolerance).
    bool grouping_consistent = false;
};

PlateauxReport plateaux_report(const RankedDistribution& ranked, const BasisMap& basis, const SpinWord& initial_word,
                               double tol = 1e-9);

}  // namespace crystalchain
