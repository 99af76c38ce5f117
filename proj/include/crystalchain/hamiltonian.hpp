#pragma once

// Crystal ladder operators and symbolic assembly of the mutation Hamiltonians.
//
// Every operator maps a label tuple to a label tuple or annihilates it; the
// amplitude of a surviving chain is exactly one. Hamiltonians are therefore
// stored as integer coefficient matrices, one per coupling constant, and are
// only turned into floating point by `evaluate`.

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "crystalchain/crystal.hpp"

namespace crystalchain {

/// Empty when the operator annihilates the state.
using LadderResult = std::optional<CrystalLabels>;

LadderResult apply_j_plus(const CrystalLabels& labels);
LadderResult apply_j_minus(const CrystalLabels& labels);

/// A_i lowers 2J^l by 2 for i <= l <= N; the dagger raises. 2 <= i <= N.
LadderResult apply_a(int i, const CrystalLabels& labels);
LadderResult apply_a_dagger(int i, const CrystalLabels& labels);

/// A_{i,k} lowers 2J^l by 2 for i <= l <= k-1. 2 <= i <= N-1, i+1 <= k <= N.
LadderResult apply_a_ik(int i, int k, const CrystalLabels& labels);
LadderResult apply_a_ik_dagger(int i, int k, const CrystalLabels& labels);

// ---------------------------------------------------------------------------
// Operator chains

enum class LadderOp { JPlus, JMinus, A, ADagger, AIK, AIKDagger };

struct LadderStep {
    LadderOp op;
    int i = 0;
    int k = 0;
};

/// Steps in written order; `apply_chain` acts right to left.
using OperatorChain = std::vector<LadderStep>;

LadderResult apply_step(const LadderStep& step, const CrystalLabels& labels);
LadderResult apply_chain(const OperatorChain& chain, const CrystalLabels& labels);

std::string to_string(const OperatorChain& chain);

// ---------------------------------------------------------------------------
// Couplings

enum class Coupling { MU0 = 0, EPS, GAMMA, DELTA, ETA, BETA };
inline constexpr std::size_t kCouplingCount = 6;
inline constexpr std::array<Coupling, kCouplingCount> kAllCouplings{
    Coupling::MU0, Coupling::EPS, Coupling::GAMMA, Coupling::DELTA, Coupling::ETA, Coupling::BETA};

std::string_view to_string(Coupling c);
/// Accepts the upper-case symbol or its lower-case flag name.
Coupling parse_coupling(std::string_view name);

struct CouplingValues {
    double mu0 = 1.0;
    double eps = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double eta = 0.0;
    double beta = 0.0;

    double& operator[](Coupling c);
    double operator[](Coupling c) const;

    CouplingValues& operator+=(const CouplingValues& rhs);
    friend CouplingValues operator+(CouplingValues lhs, const CouplingValues& rhs) { return lhs += rhs; }
    bool operator==(const CouplingValues&) const = default;
};

/// Throws std::invalid_argument on a non-finite coupling.
void check_finite(const CouplingValues& values);

// ---------------------------------------------------------------------------
// Terms of the Hamiltonian

enum class TermFamily { H1, H2, H3, H5, H6, Hamming };
std::string_view to_string(TermFamily family);

enum class TermHalf { Forward, Adjoint };

struct TermChain {
    TermFamily family;
    Coupling symbol;
    TermHalf half;
    OperatorChain chain;
};

/// Every operator chain of H_I for a chain of length n, forward half first
/// and its adjoint right after.
std::vector<TermChain> model_terms(int n);

struct SymbolicEntry {
    int row;  // 0-based
    int col;
    Coupling symbol;
    int multiplicity;
};

class SymbolicHamiltonian {
public:
    using Coefficients = Eigen::SparseMatrix<int, Eigen::RowMajor>;

    SymbolicHamiltonian(int n, Eigen::VectorXi diagonal);

    int chain_length() const { return n_; }
    Eigen::Index dim() const { return diagonal_.size(); }

    /// 2J3 of each basis state; the MU0 coefficient.
    const Eigen::VectorXi& diagonal() const { return diagonal_; }

    const Coefficients& coefficients(Coupling s) const;
    Eigen::MatrixXi dense(Coupling s) const;
    bool has(Coupling s) const;

    /// Off-diagonal nonzeros sorted by (row, col, symbol).
    std::vector<SymbolicEntry> entries() const;

    void set(Coupling s, Coefficients k);

private:
    int n_;
    Eigen::VectorXi diagonal_;
    std::array<Coefficients, kCouplingCount> coefficients_;
};

/// (row, col) -> multiplicity per generating family.
using TermProvenance = std::map<std::pair<int, int>, std::map<TermFamily, int>>;

struct BuildOptions {
    int max_n = kDefaultMaxChainLength;
    /// Restricts accumulation to one half of each term; used to check adjoint pairing.
    std::optional<TermHalf> only_half;
    TermProvenance* provenance = nullptr;
};

/// H0 + H_I: MU0 diagonal 2J3, EPS = H3 + H5, GAMMA = H1, DELTA = H2, ETA = H6.
SymbolicHamiltonian build_model(const BasisMap& basis, const BuildOptions& options = {});
SymbolicHamiltonian build_model(int n, const BuildOptions& options = {});

/// Single-site flips with coupling BETA, plus the MU0 diagonal when `with_field`.
SymbolicHamiltonian build_hamming(const BasisMap& basis, bool with_field = true);
SymbolicHamiltonian build_hamming(int n, bool with_field = true, int max_n = kDefaultMaxChainLength);

/// Basis indices f != state with a nonzero coefficient at (f, state).
std::vector<std::size_t> allowed_transitions(const SymbolicHamiltonian& sym, std::size_t state);

/// "row col symbol multiplicity" lines, 1-based; diagonal as "row row MU0 <2J3>".
std::string symbolic_dump(const SymbolicHamiltonian& sym);

template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> evaluate(const SymbolicHamiltonian& sym,
                                                               const CouplingValues& values) {
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Matrix h = (static_cast<Scalar>(values.mu0) * sym.diagonal().cast<Scalar>()).asDiagonal();
    for (Coupling s : kAllCouplings) {
        if (s == Coupling::MU0 || !sym.has(s)) continue;
        const Scalar weight = static_cast<Scalar>(values[s]);
        const auto& k = sym.coefficients(s);
        for (Eigen::Index r = 0; r < k.outerSize(); ++r)
            for (typename SymbolicHamiltonian::Coefficients::InnerIterator it(k, r); it; ++it)
                h(it.row(), it.col()) += weight * static_cast<Scalar>(it.value());
    }
    return h;
}

// ---------------------------------------------------------------------------
// Case analysis around a flipped site (diagnostic).

struct MutationContext {
    int position = 0;  // 1-based
    Spin from = Spin::R;
    int r_l = 0;  // free purines strictly left of the site
    int y_r = 0;  // free pyrimidines strictly right of the site
    int r_in = 0;
    int y_in = 0;
    int r_fi = 0;
    int y_fi = 0;

    /// Term family whose case condition holds. R_l > Y_r with Y_r != 0 is the
    /// H4 case, folded into H3.
    TermFamily family() const;
};

MutationContext mutation_context(const SpinWord& word, int position);

}  // namespace crystalchain
