#include "crystalchain/format.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace crystalchain {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
    return std::string(buf.data(), ptr);
}

std::string profile_csv(const TransitionProfile<double>& profile, const BasisMap& basis) {
    std::ostringstream os;
    os << "index,word,two_j3,two_jN,p_avg\n";
    for (std::size_t f = 0; f < basis.size(); ++f) {
        const BasisState& s = basis[f];
        os << f + 1 << ',' << s.word.str() << ',' << s.labels.two_j3 << ',' << s.labels.two_j_top() << ','
           << format_double(profile.p_avg(static_cast<Eigen::Index>(f))) << '\n';
    }
    return os.str();
}

std::string ranked_csv(const RankedDistribution& ranked, const BasisMap& basis) {
    std::ostringstream os;
    os << "rank,index,word,value\n";
    for (const RankedEntry& e : ranked.entries)
        os << e.rank << ',' << e.index + 1 << ',' << basis[e.index].word.str() << ',' << format_double(e.value)
           << '\n';
    return os.str();
}

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = line.find(sep, start);
        std::string field(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        while (!field.empty() && field.front() == ' ') field.erase(field.begin());
        out.push_back(std::move(field));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

template <typename T>
T parse_number(const std::string& field, int line_no) {
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw std::invalid_argument("line " + std::to_string(line_no) + ": cannot parse \"" + field + "\"");
    return value;
}

}  // namespace

RankedDistribution parse_ranked_csv(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("ranked CSV is empty");
    const std::vector<std::string> header = split(line, ',');
    int rank_col = -1, index_col = -1, value_col = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "rank") rank_col = static_cast<int>(c);
        if (header[c] == "index") index_col = static_cast<int>(c);
        if (header[c] == "value") value_col = static_cast<int>(c);
    }
    if (rank_col < 0 || value_col < 0) throw std::invalid_argument("ranked CSV needs 'rank' and 'value' columns");

    RankedDistribution out;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split(line, ',');
        if (fields.size() != header.size())
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " fields");
        RankedEntry e;
        e.rank = parse_number<int>(fields[static_cast<std::size_t>(rank_col)], line_no);
        e.value = parse_number<double>(fields[static_cast<std::size_t>(value_col)], line_no);
        e.index = index_col >= 0 ? parse_number<std::size_t>(fields[static_cast<std::size_t>(index_col)], line_no) - 1
                                 : out.entries.size();
        if (e.rank < 1) throw std::invalid_argument("line " + std::to_string(line_no) + ": rank must be >= 1");
        out.entries.push_back(e);
    }
    return out;
}

std::string plot_text(const RankedDistribution& ranked) {
    std::ostringstream os;
    for (const RankedEntry& e : ranked.entries) os << e.rank << ' ' << format_double(e.value) << '\n';
    return os.str();
}

nlohmann::ordered_json fit_json(const FitResult& fit) {
    nlohmann::ordered_json j;
    j["model"] = to_string(fit.model);
    j["a"] = fit.a;
    j["k"] = fit.k;
    j["b"] = fit.b;
    j["sse_log"] = fit.sse_log;
    j["sse_linear"] = fit.sse_linear;
    j["r2"] = fit.r2;
    j["points_used"] = fit.points_used;
    j["points_excluded"] = fit.points_excluded;
    j["fit_space"] = fit.fit_space == FitSpace::Log ? "log" : "linear";
    if (!fit.converged) j["converged"] = false;
    return j;
}

nlohmann::ordered_json plateaux_json(const PlateauxReport& report) {
    nlohmann::ordered_json j;
    j["exact"] = report.exact;
    j["grouping_consistent"] = report.grouping_consistent;
    j["max_spread"] = report.max_spread;
    auto& groups = j["groups"] = nlohmann::ordered_json::array();
    for (const PlateauxGroup& g : report.groups) {
        if (g.states.empty()) continue;
        nlohmann::ordered_json gj;
        gj["distance"] = g.distance;
        gj["size"] = g.states.size();
        gj["mean"] = g.mean;
        gj["spread"] = g.spread;
        groups.push_back(std::move(gj));
    }
    return j;
}

}  // namespace crystalchain
