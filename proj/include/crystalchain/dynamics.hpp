#pragma once

// Exact diagonalization and time-averaged transition probabilities.
//
// With H = V diag(lambda) V^T real symmetric and a basis-vector initial
// state i, the amplitude to f is sum_m c_m exp(-i lambda_m t) with
// c_m = V(f, m) V(i, m), so every quantity below is a finite sum over the
// spectrum (hbar = 1, times in units of 1/mu0).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace crystalchain {

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct SpectralDecomposition {
    VectorX<Scalar> eigenvalues;   // ascending
    MatrixX<Scalar> eigenvectors;  // column m belongs to eigenvalues(m)

    Eigen::Index dim() const { return eigenvalues.size(); }
};

template <typename Scalar>
struct TransitionProfile {
    std::size_t initial = 0;
    /// Averaging horizon; +inf for the infinite-time limit.
    Scalar horizon = 0;
    VectorX<Scalar> p_avg;
};

namespace detail {

template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? typename Derived::Scalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Scalar>
Scalar sinc(Scalar x) {
    if (std::abs(x) < Scalar(1e-4)) {
        const Scalar x2 = x * x;
        return Scalar(1) - x2 / Scalar(6) * (Scalar(1) - x2 / Scalar(20));
    }
    return std::sin(x) / x;
}

template <typename Scalar>
void check_index(const SpectralDecomposition<Scalar>& spec, std::size_t i) {
    if (static_cast<Eigen::Index>(i) >= spec.dim())
        throw std::out_of_range("state index " + std::to_string(i) + " outside basis");
}

/// W(f, m) = V(f, m) V(i, m).
template <typename Scalar>
MatrixX<Scalar> overlap_weights(const SpectralDecomposition<Scalar>& spec, std::size_t i) {
    return spec.eigenvectors.array().rowwise() *
           spec.eigenvectors.row(static_cast<Eigen::Index>(i)).array();
}

}  // namespace detail

/// Eigenpairs of a real symmetric matrix. `tol` is relative to max|H(r, c)|
/// and bounds the symmetry defect, the residual |HV - V diag(lambda)| and
/// |V^T V - I|. Each eigenvector is signed so that its largest-magnitude
/// component (first one on ties) is nonnegative.
template <typename Derived>
SpectralDecomposition<typename Derived::Scalar> eigendecompose(
    const Eigen::MatrixBase<Derived>& h, typename Derived::Scalar tol = typename Derived::Scalar(1e-10)) {
    using Scalar = typename Derived::Scalar;
    if (h.rows() != h.cols()) throw std::invalid_argument("eigendecompose needs a square matrix");
    const Scalar scale = std::max(detail::max_abs(h), Scalar(1));
    if (detail::max_abs(h - h.transpose()) > tol * scale)
        throw std::invalid_argument("eigendecompose needs a symmetric matrix");

    const MatrixX<Scalar> sym = (h + h.transpose()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(sym);
    if (solver.info() != Eigen::Success) throw ConvergenceError("symmetric eigensolver did not converge");

    SpectralDecomposition<Scalar> out{solver.eigenvalues(), solver.eigenvectors()};
    for (Eigen::Index m = 0; m < out.dim(); ++m) {
        auto col = out.eigenvectors.col(m);
        Eigen::Index pivot = 0;
        Scalar best = -1;
        for (Eigen::Index r = 0; r < col.size(); ++r) {
            // the slack keeps numerically tied components from flipping the choice
            if (std::abs(col(r)) > best * (Scalar(1) + Scalar(1e-9))) {
                best = std::abs(col(r));
                pivot = r;
            }
        }
        if (col(pivot) < 0) col = -col;
    }

    const auto& v = out.eigenvectors;
    const Scalar residual = detail::max_abs(sym * v - v * out.eigenvalues.asDiagonal());
    const Scalar orthogonality = detail::max_abs(v.transpose() * v - MatrixX<Scalar>::Identity(v.rows(), v.cols()));
    if (residual > tol * scale || orthogonality > tol)
        throw ConvergenceError("eigendecomposition residual above tolerance");
    return out;
}

/// |<f| exp(-iHt) |i>|^2.
template <typename Scalar>
Scalar transition_probability(const SpectralDecomposition<Scalar>& spec, std::size_t i, std::size_t f, Scalar t) {
    detail::check_index(spec, i);
    detail::check_index(spec, f);
    const auto vi = spec.eigenvectors.row(static_cast<Eigen::Index>(i)).array();
    const auto vf = spec.eigenvectors.row(static_cast<Eigen::Index>(f)).array();
    const auto phase = (spec.eigenvalues.array() * t).transpose();
    const Scalar re = (vi * vf * phase.cos()).sum();
    const Scalar im = (vi * vf * phase.sin()).sum();
    return re * re + im * im;
}

/// Probabilities to every final state at time t.
template <typename Scalar>
VectorX<Scalar> transition_row(const SpectralDecomposition<Scalar>& spec, std::size_t i, Scalar t) {
    detail::check_index(spec, i);
    const MatrixX<Scalar> w = detail::overlap_weights(spec, i);
    const VectorX<Scalar> phase = spec.eigenvalues * t;
    const VectorX<Scalar> re = w * phase.array().cos().matrix();
    const VectorX<Scalar> im = w * phase.array().sin().matrix();
    return re.cwiseAbs2() + im.cwiseAbs2();
}

/// (1/T) int_0^T p_if(t) dt for every f, from sum_{m,n} c_m c_n sinc((l_m - l_n) T).
template <typename Scalar>
TransitionProfile<Scalar> time_averaged_profile(const SpectralDecomposition<Scalar>& spec, std::size_t i,
                                                Scalar horizon) {
    detail::check_index(spec, i);
    if (!(horizon > 0)) throw std::invalid_argument("averaging horizon must be positive");
    const Eigen::Index d = spec.dim();
    MatrixX<Scalar> kernel(d, d);
    for (Eigen::Index n = 0; n < d; ++n)
        for (Eigen::Index m = 0; m < d; ++m)
            kernel(m, n) = detail::sinc((spec.eigenvalues(m) - spec.eigenvalues(n)) * horizon);
    const MatrixX<Scalar> w = detail::overlap_weights(spec, i);
    TransitionProfile<Scalar> out;
    out.initial = i;
    out.horizon = horizon;
    out.p_avg = ((w * kernel).array() * w.array()).rowwise().sum().matrix();
    return out;
}

/// Default eigenvalue clustering width, 1e-9 * max|lambda|.
template <typename Scalar>
Scalar default_degeneracy_tol(const SpectralDecomposition<Scalar>& spec) {
    return Scalar(1e-9) * std::max(detail::max_abs(spec.eigenvalues), Scalar(std::numeric_limits<Scalar>::min()));
}

/// T -> infinity limit: sum over eigenvalue clusters C of (sum_{m in C} c_m)^2.
/// Clusters chain consecutive ascending eigenvalues closer than `degeneracy_tol`;
/// a negative value selects `default_degeneracy_tol`.
template <typename Scalar>
TransitionProfile<Scalar> infinite_time_average(const SpectralDecomposition<Scalar>& spec, std::size_t i,
                                                Scalar degeneracy_tol = Scalar(-1)) {
    detail::check_index(spec, i);
    if (degeneracy_tol < 0) degeneracy_tol = default_degeneracy_tol(spec);
    const MatrixX<Scalar> w = detail::overlap_weights(spec, i);
    TransitionProfile<Scalar> out;
    out.initial = i;
    out.horizon = std::numeric_limits<Scalar>::infinity();
    out.p_avg = VectorX<Scalar>::Zero(spec.dim());
    Eigen::Index begin = 0;
    while (begin < spec.dim()) {
        Eigen::Index end = begin + 1;
        while (end < spec.dim() && spec.eigenvalues(end) - spec.eigenvalues(end - 1) <= degeneracy_tol) ++end;
        out.p_avg += w.middleCols(begin, end - begin).rowwise().sum().cwiseAbs2();
        begin = end;
    }
    return out;
}

struct StableHorizonOptions {
    double rel_tol = 1e-3;
    double growth = 2.0;
    double start = 10.0;
    double cap = 1e9;
};

/// Smallest T in start * growth^j with max_f |<p>_T - <p>_{growth T}| <= rel_tol.
/// Throws ConvergenceError once T would exceed `cap`.
template <typename Scalar>
Scalar find_stable_T(const SpectralDecomposition<Scalar>& spec, std::size_t i,
                     const StableHorizonOptions& options = {}) {
    if (!(options.rel_tol > 0)) throw std::invalid_argument("stable horizon tolerance must be positive");
    if (!(options.growth > 1)) throw std::invalid_argument("stable horizon growth factor must exceed 1");
    if (!(options.start > 0)) throw std::invalid_argument("stable horizon start must be positive");
    Scalar t = static_cast<Scalar>(options.start);
    VectorX<Scalar> current = time_averaged_profile(spec, i, t).p_avg;
    while (t * static_cast<Scalar>(options.growth) <= static_cast<Scalar>(options.cap)) {
        const Scalar next_t = t * static_cast<Scalar>(options.growth);
        VectorX<Scalar> next = time_averaged_profile(spec, i, next_t).p_avg;
        if (detail::max_abs(next - current) <= static_cast<Scalar>(options.rel_tol)) return t;
        t = next_t;
        current = std::move(next);
    }
    throw ConvergenceError("time average not stable below T = " + std::to_string(options.cap) +
                           "; use the infinite-time average");
}

}  // namespace crystalchain
