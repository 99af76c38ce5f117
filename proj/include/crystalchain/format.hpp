#pragma once

// Text artifacts: CSV tables and JSON fragments.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crystalchain/analysis.hpp"
#include "crystalchain/crystal.hpp"
#include "crystalchain/dynamics.hpp"

namespace crystalchain {

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);

/// index,word,two_j3,two_jN,p_avg (1-based index).
std::string profile_csv(const TransitionProfile<double>& profile, const BasisMap& basis);

/// rank,index,word,value (1-based index).
std::string ranked_csv(const RankedDistribution& ranked, const BasisMap& basis);

/// Reads the ranked CSV layout back. Word and index columns are optional.
RankedDistribution parse_ranked_csv(std::string_view text);

/// Two whitespace-separated columns: rank value.
std::string plot_text(const RankedDistribution& ranked);

nlohmann::ordered_json fit_json(const FitResult& fit);
nlohmann::ordered_json plateaux_json(const PlateauxReport& report);

}  // namespace crystalchain
