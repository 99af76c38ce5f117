#include "crystalchain/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crystalchain {

RankedDistribution rank_order(const TransitionProfile<double>& profile, bool include_self) {
    RankedDistribution out;
    out.initial = profile.initial;
    out.include_self = include_self;
    for (Eigen::Index f = 0; f < profile.p_avg.size(); ++f) {
        if (!include_self && static_cast<std::size_t>(f) == profile.initial) continue;
        out.entries.push_back({0, static_cast<std::size_t>(f), profile.p_avg(f)});
    }
    std::stable_sort(out.entries.begin(), out.entries.end(),
                     [](const RankedEntry& x, const RankedEntry& y) { return x.value > y.value; });
    for (std::size_t r = 0; r < out.entries.size(); ++r) out.entries[r].rank = static_cast<int>(r + 1);
    return out;
}

std::string_view to_string(FitModel model) { return model == FitModel::Yule ? "yule" : "zipf"; }

FitModel parse_fit_model(std::string_view name) {
    if (name == "yule" || name == "Yule") return FitModel::Yule;
    if (name == "zipf" || name == "Zipf") return FitModel::Zipf;
    throw std::invalid_argument("unknown fit model \"" + std::string(name) + "\"");
}

double FitResult::predict(double rank) const { return a * std::pow(rank, k) * std::pow(b, rank); }

namespace {

struct FitPoints {
    Eigen::VectorXd rank;
    Eigen::VectorXd value;
    std::size_t excluded = 0;
};

FitPoints positive_points(const RankedDistribution& ranked, FitModel model) {
    std::vector<double> ranks;
    std::vector<double> values;
    FitPoints pts;
    for (const RankedEntry& e : ranked.entries) {
        if (e.value > 0 && std::isfinite(e.value)) {
            ranks.push_back(e.rank);
            values.push_back(e.value);
        } else {
            ++pts.excluded;
        }
    }
    const std::size_t needed = model == FitModel::Yule ? 4 : 3;
    if (values.size() < needed)
        throw FitError(std::string(to_string(model)) + " fit needs at least " + std::to_string(needed) +
                       " positive points, got " + std::to_string(values.size()));
    pts.rank = Eigen::Map<Eigen::VectorXd>(ranks.data(), static_cast<Eigen::Index>(ranks.size()));
    pts.value = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return pts;
}

Eigen::VectorXd model_values(const FitResult& fit, const Eigen::VectorXd& rank) {
    return rank.unaryExpr([&](double r) { return fit.predict(r); });
}

void fill_statistics(FitResult& fit, const FitPoints& pts) {
    const Eigen::VectorXd predicted = model_values(fit, pts.rank);
    fit.sse_linear = (pts.value - predicted).squaredNorm();
    fit.sse_log = (pts.value.array().log() - predicted.array().log()).matrix().squaredNorm();
    fit.sse = fit.fit_space == FitSpace::Log ? fit.sse_log : fit.sse_linear;
    const double ss_tot = (pts.value.array() - pts.value.mean()).matrix().squaredNorm();
    fit.r2 = ss_tot > 0 ? 1.0 - fit.sse_linear / ss_tot : (fit.sse_linear == 0 ? 1.0 : 0.0);
    fit.points_used = static_cast<std::size_t>(pts.value.size());
    fit.points_excluded = pts.excluded;
}

}  // namespace

FitResult fit_log_linear(const RankedDistribution& ranked, FitModel model) {
    const FitPoints pts = positive_points(ranked, model);
    const Eigen::Index cols = model == FitModel::Yule ? 3 : 2;
    Eigen::MatrixXd design(pts.rank.size(), cols);
    design.col(0).setOnes();
    design.col(1) = pts.rank.array().log().matrix();
    if (model == FitModel::Yule) design.col(2) = pts.rank;
    const Eigen::VectorXd rhs = pts.value.array().log().matrix();
    const Eigen::VectorXd coeffs = design.colPivHouseholderQr().solve(rhs);

    FitResult fit;
    fit.model = model;
    fit.fit_space = FitSpace::Log;
    fit.a = std::exp(coeffs(0));
    fit.k = coeffs(1);
    fit.b = model == FitModel::Yule ? std::exp(coeffs(2)) : 1.0;
    fill_statistics(fit, pts);
    return fit;
}

FitResult fit_refine(const RankedDistribution& ranked, const FitResult& initial) {
    constexpr int kMaxIterations = 500;
    constexpr double kStepTol = 1e-12;

    const FitPoints pts = positive_points(ranked, initial.model);
    const bool yule = initial.model == FitModel::Yule;
    const Eigen::Index np = yule ? 3 : 2;

    // parameters (log a, k, log b) keep a and b positive
    Eigen::VectorXd theta(np);
    theta(0) = std::log(initial.a);
    theta(1) = initial.k;
    if (yule) theta(2) = std::log(initial.b);

    const Eigen::VectorXd log_rank = pts.rank.array().log().matrix();
    auto predict = [&](const Eigen::VectorXd& p) -> Eigen::VectorXd {
        Eigen::ArrayXd expo = p(0) + p(1) * log_rank.array();
        if (yule) expo += p(2) * pts.rank.array();
        return expo.exp().matrix();
    };
    auto sse_of = [&](const Eigen::VectorXd& p) { return (pts.value - predict(p)).squaredNorm(); };

    FitResult seed = initial;
    seed.fit_space = FitSpace::Linear;
    fill_statistics(seed, pts);

    double sse = sse_of(theta);
    if (!std::isfinite(sse)) {
        seed.converged = false;
        return seed;
    }
    double lambda = 1e-3;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        const Eigen::VectorXd model = predict(theta);
        const Eigen::VectorXd residual = pts.value - model;
        Eigen::MatrixXd jac(pts.rank.size(), np);
        jac.col(0) = model;
        jac.col(1) = model.cwiseProduct(log_rank);
        if (yule) jac.col(2) = model.cwiseProduct(pts.rank);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * residual;

        bool accepted = false;
        Eigen::VectorXd step;
        while (lambda < 1e12) {
            Eigen::MatrixXd damped = jtj;
            damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
            step = damped.ldlt().solve(jtr);
            const Eigen::VectorXd trial = theta + step;
            const double trial_sse = sse_of(trial);
            if (std::isfinite(trial_sse) && trial_sse <= sse) {
                theta = trial;
                sse = trial_sse;
                lambda = std::max(lambda / 10, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10;
        }
        if (!accepted || step.norm() <= kStepTol * (theta.norm() + kStepTol)) break;
    }

    FitResult out = initial;
    out.fit_space = FitSpace::Linear;
    out.a = std::exp(theta(0));
    out.k = theta(1);
    out.b = yule ? std::exp(theta(2)) : 1.0;
    out.converged = true;
    fill_statistics(out, pts);
    if (!std::isfinite(out.sse_linear) || out.sse_linear > seed.sse_linear) {
        seed.converged = false;
        return seed;
    }
    return out;
}

ModelComparison compare_models(const RankedDistribution& ranked) {
    ModelComparison out{fit_log_linear(ranked, FitModel::Yule), fit_log_linear(ranked, FitModel::Zipf), 1.0};
    // residuals at round-off level count as an exact fit
    const double floor = 1e-24 * static_cast<double>(out.yule.points_used);
    out.sse_ratio = std::max(out.zipf.sse_log, floor) / std::max(out.yule.sse_log, floor);
    return out;
}

PlateauxReport plateaux_report(const RankedDistribution& ranked, const BasisMap& basis, const SpinWord& initial_word,
                               double tol) {
    const int n = basis.chain_length();
    PlateauxReport report;
    report.groups.resize(static_cast<std::size_t>(n + 1));
    for (int d = 0; d <= n; ++d) report.groups[static_cast<std::size_t>(d)].distance = d;
    for (const RankedEntry& e : ranked.entries) {
        const int d = hamming_distance(basis[e.index].word, initial_word);
        auto& g = report.groups[static_cast<std::size_t>(d)];
        g.states.push_back(e.index);
        g.values.push_back(e.value);
    }

    std::vector<const PlateauxGroup*> nonempty;
    report.exact = true;
    for (auto& g : report.groups) {
        if (g.values.empty()) continue;
        const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
        g.spread = *hi - *lo;
        g.mean = std::accumulate(g.values.begin(), g.values.end(), 0.0) / static_cast<double>(g.values.size());
        report.max_spread = std::max(report.max_spread, g.spread);
        report.exact = report.exact && g.spread <= tol;
        nonempty.push_back(&g);
    }

    std::sort(nonempty.begin(), nonempty.end(),
              [](const PlateauxGroup* x, const PlateauxGroup* y) { return x->mean > y->mean; });
    report.grouping_consistent = true;
    for (std::size_t g = 0; g + 1 < nonempty.size(); ++g) {
        const double lowest = *std::min_element(nonempty[g]->values.begin(), nonempty[g]->values.end());
        const double highest = *std::max_element(nonempty[g + 1]->values.begin(), nonempty[g + 1]->values.end());
        if (lowest < highest - tol) report.grouping_consistent = false;
    }
    return report;
}

}  // namespace crystalchain
