#pragma once

// Test-only reference computations. Nothing here goes through the
// eigendecomposition or the closed-form averages under test.

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "crystalchain/crystal.hpp"

namespace oracle {

/// exp(-i H t) by scaling and squaring with a Taylor kernel.
inline Eigen::MatrixXcd propagator(const Eigen::MatrixXd& h, double t) {
    const Eigen::MatrixXcd a = std::complex<double>(0.0, -t) * h.cast<std::complex<double>>();
    const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
    const Eigen::MatrixXcd scaled = a / std::ldexp(1.0, squarings);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(h.rows(), h.cols());
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

/// Row of |<f|U(t)|i>|^2 by direct propagation.
inline Eigen::VectorXd probabilities(const Eigen::MatrixXd& h, std::size_t i, double t) {
    return propagator(h, t).col(static_cast<Eigen::Index>(i)).cwiseAbs2();
}

/// (1/T) int_0^T p_if(t) dt by the trapezoid rule with `samples` intervals,
/// stepping the state with the propagator of one interval.
inline Eigen::VectorXd trapezoid_average(const Eigen::MatrixXd& h, std::size_t i, double horizon, int samples) {
    const Eigen::MatrixXcd step = propagator(h, horizon / samples);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(h.rows());
    psi(static_cast<Eigen::Index>(i)) = 1.0;
    Eigen::VectorXd acc = 0.5 * psi.cwiseAbs2();
    for (int s = 1; s <= samples; ++s) {
        psi = step * psi;
        const Eigen::VectorXd p = psi.cwiseAbs2();
        acc += (s == samples ? 0.5 : 1.0) * p;
    }
    return acc / samples;
}

/// Composite Simpson rule for a scalar function on [0, T].
template <typename F>
double simpson(F&& f, double horizon, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = horizon / intervals;
    double acc = f(0.0) + f(horizon);
    for (int s = 1; s < intervals; ++s) acc += (s % 2 ? 4.0 : 2.0) * f(s * h);
    return acc * h / 3.0;
}

/// Hamming model with mu0 = 0 factorizes over sites: each site flips with
/// probability sin^2(beta t), so p(t) = sin^{2d} cos^{2(N-d)}.
inline double factorized_hamming_average(int n, int distance, double beta, double horizon) {
    auto p = [&](double t) {
        const double s2 = std::pow(std::sin(beta * t), 2);
        return std::pow(s2, distance) * std::pow(1.0 - s2, n - distance);
    };
    return simpson(p, horizon, 200000) / horizon;
}

/// The printed N=3 matrix in canonical order: diagonal in units of mu0,
/// off-diagonal symbols d (delta), g (gamma), e (eps), 0 for zero.
struct ReferenceN3 {
    int diagonal[8] = {-1, 1, -1, 1, -3, -1, 1, 3};
    char symbol[8][9] = {
        "-d0ge0e0",
        "d-000e0e",
        "00-de0e0",
        "g0d-0e0e",
        "e0e0-d00",
        "0e0ed-d0",
        "e0e00d-d",
        "0e0e00d-",
    };
};

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t count, double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(count);
    for (double& v : out) v = dist(rng);
    return out;
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index dim) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r)
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = dist(rng);
    return (m + m.transpose()) / 2.0;
}

}  // namespace oracle
