#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "crystalchain/analysis.hpp"
#include "crystalchain/hamiltonian.hpp"
#include "oracles.hpp"

using namespace crystalchain;

namespace {

RankedDistribution synthetic(std::size_t count, double a, double k, double b) {
    RankedDistribution r;
    for (std::size_t i = 0; i < count; ++i) {
        const double rank = static_cast<double>(i + 1);
        r.entries.push_back({static_cast<int>(i + 1), i, a * std::pow(rank, k) * std::pow(b, rank)});
    }
    return r;
}

TransitionProfile<double> profile_of(std::vector<double> values, std::size_t initial) {
    TransitionProfile<double> p;
    p.initial = initial;
    p.horizon = 1.0;
    p.p_avg = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    return p;
}

}  // namespace

TEST_CASE("rank_order sorts descending with index tie-break") {
    const auto p = profile_of({0.1, 0.4, 0.1, 0.3, 0.1}, 3);
    const RankedDistribution without = rank_order(p);
    REQUIRE(without.size() == 4);
    CHECK(without.entries[0].index == 1);
    CHECK(without.entries[1].index == 0);
    CHECK(without.entries[2].index == 2);
    CHECK(without.entries[3].index == 4);
    for (std::size_t i = 0; i < without.size(); ++i) CHECK(without.entries[i].rank == static_cast<int>(i + 1));
    CHECK_FALSE(without.include_self);

    const RankedDistribution with = rank_order(p, true);
    REQUIRE(with.size() == 5);
    CHECK(with.entries[1].index == 3);
    CHECK(with.include_self);

    const RankedDistribution delta = rank_order(profile_of({0, 0, 1, 0}, 2));
    REQUIRE(delta.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(delta.entries[i].value == 0.0);
    CHECK(delta.entries[0].index == 0);
    CHECK(delta.entries[2].index == 3);
}

TEST_CASE("rank_order is a permutation of the profile") {
    std::mt19937_64 rng(41);
    const auto values = oracle::random_values(rng, 64, 0.0, 1.0);
    const RankedDistribution r = rank_order(profile_of(values, 7), true);
    std::vector<double> sorted_in(values), sorted_out;
    for (const auto& e : r.entries) sorted_out.push_back(e.value);
    for (std::size_t i = 1; i < sorted_out.size(); ++i) CHECK(sorted_out[i - 1] >= sorted_out[i]);
    std::sort(sorted_in.begin(), sorted_in.end());
    std::sort(sorted_out.begin(), sorted_out.end());
    CHECK(sorted_in == sorted_out);
}

TEST_CASE("log-linear Yule fit recovers generating parameters") {
    const RankedDistribution r = synthetic(63, 1.96, -1.49, 0.24);
    const FitResult fit = fit_log_linear(r, FitModel::Yule);
    CHECK(std::abs(fit.a - 1.96) <= 1e-6);
    CHECK(std::abs(fit.k + 1.49) <= 1e-6);
    CHECK(std::abs(fit.b - 0.24) <= 1e-6);
    CHECK(fit.sse_log <= 1e-18);
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fit.points_used == 63);
    CHECK(fit.points_excluded == 0);
    CHECK(fit.predict(2.0) == doctest::Approx(1.96 * std::pow(2.0, -1.49) * 0.0576));
}

TEST_CASE("fit edge cases") {
    RankedDistribution constant;
    for (int i = 0; i < 10; ++i) constant.entries.push_back({i + 1, static_cast<std::size_t>(i), 0.125});
    const FitResult flat = fit_log_linear(constant, FitModel::Yule);
    CHECK(std::abs(flat.k) <= 1e-10);
    CHECK(std::abs(flat.b - 1.0) <= 1e-10);
    CHECK(flat.a == doctest::Approx(0.125));

    // pure power law: Yule finds b = 1 and both models fit equally
    const RankedDistribution zipf = synthetic(20, 0.7, -1.2, 1.0);
    const ModelComparison cmp = compare_models(zipf);
    CHECK(std::abs(cmp.yule.b - 1.0) <= 1e-9);
    CHECK(cmp.zipf.k == doctest::Approx(-1.2));
    CHECK(cmp.zipf.b == 1.0);
    CHECK(cmp.sse_ratio == doctest::Approx(1.0));

    // zero values are excluded, not logged
    RankedDistribution with_zero = synthetic(8, 1.0, -0.5, 0.8);
    with_zero.entries.push_back({9, 8, 0.0});
    const FitResult fz = fit_log_linear(with_zero, FitModel::Yule);
    CHECK(fz.points_used == 8);
    CHECK(fz.points_excluded == 1);

    CHECK_THROWS_AS(fit_log_linear(synthetic(3, 1, -1, 0.5), FitModel::Yule), FitError);
    CHECK_NOTHROW(fit_log_linear(synthetic(3, 1, -1, 0.5), FitModel::Zipf));
    CHECK_THROWS_AS(fit_log_linear(synthetic(2, 1, -1, 0.5), FitModel::Zipf), FitError);
    RankedDistribution zeros;
    for (int i = 0; i < 6; ++i) zeros.entries.push_back({i + 1, static_cast<std::size_t>(i), 0.0});
    CHECK_THROWS_AS(fit_log_linear(zeros, FitModel::Yule), FitError);

    CHECK(parse_fit_model("Yule") == FitModel::Yule);
    CHECK_THROWS_AS(parse_fit_model("pareto"), std::invalid_argument);
}

TEST_CASE("fit properties on random data") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> noise(-0.2, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
        RankedDistribution r = synthetic(31, 0.5, -0.8, 0.9);
        for (auto& e : r.entries) e.value *= std::exp(noise(rng));
        const ModelComparison cmp = compare_models(r);
        // nested models
        CHECK(cmp.zipf.sse_log >= cmp.yule.sse_log - 1e-12);
        CHECK(cmp.sse_ratio >= 1.0 - 1e-12);
        CHECK(cmp.yule.r2 <= 1.0);

        // scale equivariance: f -> c f gives a -> c a
        RankedDistribution scaled = r;
        for (auto& e : scaled.entries) e.value *= 3.5;
        const FitResult s = fit_log_linear(scaled, FitModel::Yule);
        CHECK(s.a == doctest::Approx(3.5 * cmp.yule.a).epsilon(1e-9));
        CHECK(s.k == doctest::Approx(cmp.yule.k).epsilon(1e-9));
        CHECK(s.b == doctest::Approx(cmp.yule.b).epsilon(1e-9));
    }
}

TEST_CASE("linear-space refinement") {
    const RankedDistribution exact = synthetic(15, 0.9, -0.7, 0.8);
    const FitResult seed = fit_log_linear(exact, FitModel::Yule);
    const FitResult fixed = fit_refine(exact, seed);
    CHECK(fixed.fit_space == FitSpace::Linear);
    CHECK(fixed.a == doctest::Approx(0.9).epsilon(1e-8));
    CHECK(fixed.k == doctest::Approx(-0.7).epsilon(1e-8));
    CHECK(fixed.b == doctest::Approx(0.8).epsilon(1e-8));

    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> noise(-0.05, 0.05);
    for (int trial = 0; trial < 10; ++trial) {
        RankedDistribution r = exact;
        for (auto& e : r.entries) e.value *= 1.0 + noise(rng);
        const FitResult log_fit = fit_log_linear(r, FitModel::Yule);
        const FitResult refined = fit_refine(r, log_fit);
        CHECK(refined.sse_linear <= log_fit.sse_linear * (1 + 1e-12));
        CHECK(refined.sse == refined.sse_linear);
        const FitResult zipf_refined = fit_refine(r, fit_log_linear(r, FitModel::Zipf));
        CHECK(zipf_refined.b == 1.0);
    }
}

TEST_CASE("plateaux report on hand-made data") {
    const BasisMap basis = enumerate_basis(2);  // RY YY YR RR
    const SpinWord initial = SpinWord::parse("RR");
    const RankedDistribution r = rank_order(profile_of({0.25, 0.1, 0.25, 0.4}, 3), true);
    const PlateauxReport report = plateaux_report(r, basis, initial);
    REQUIRE(report.groups.size() == 3);
    CHECK(report.groups[0].states.size() == 1);
    CHECK(report.groups[1].states.size() == 2);
    CHECK(report.groups[2].states.size() == 1);
    CHECK(report.exact);
    CHECK(report.grouping_consistent);
    CHECK(report.groups[1].mean == doctest::Approx(0.25));

    const PlateauxReport broken = plateaux_report(rank_order(profile_of({0.3, 0.1, 0.2, 0.4}, 3), true), basis, initial);
    CHECK_FALSE(broken.exact);
    CHECK(broken.max_spread == doctest::Approx(0.1));
}

TEST_CASE("factorized Hamming baseline has exact plateaux") {
    const double beta = 0.5;
    const double horizon = 37.0;
    for (int n = 2; n <= 6; ++n) {
        CAPTURE(n);
        const BasisMap basis = enumerate_basis(n);
        const auto spec = eigendecompose(evaluate(build_hamming(basis, false), CouplingValues{0, 0, 0, 0, 0, beta}));
        const SpinWord initial = basis[basis.size() / 3].word;
        const std::size_t i = basis.index_of(initial);
        const auto profile = time_averaged_profile(spec, i, horizon);
        const PlateauxReport report = plateaux_report(rank_order(profile, true), basis, initial);
        CHECK(report.exact);
        CHECK(report.max_spread <= 1e-9);
        for (const auto& g : report.groups) {
            CHECK(g.states.size() == static_cast<std::size_t>(std::round(std::tgamma(n + 1) /
                                                                        (std::tgamma(g.distance + 1) *
                                                                         std::tgamma(n - g.distance + 1)))));
            CHECK(std::abs(g.mean - oracle::factorized_hamming_average(n, g.distance, beta, horizon)) <= 1e-6);
        }
    }
}

TEST_CASE("model Hamiltonian breaks the plateaux") {
    const BasisMap basis = enumerate_basis(3);
    const auto spec = eigendecompose(evaluate(build_model(basis), CouplingValues{1, 0.1, 0.3, 0.3, 0, 0}));
    const SpinWord initial = SpinWord::parse("RRY");
    const auto profile = infinite_time_average(spec, basis.index_of(initial));
    const PlateauxReport report = plateaux_report(rank_order(profile), basis, initial);
    CHECK_FALSE(report.exact);
    CHECK(report.max_spread > 1e-3);
}
