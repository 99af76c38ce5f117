#include "crystalchain/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace crystalchain {

namespace {

LadderResult checked(CrystalLabels labels) {
    if (!validate_labels(labels)) return std::nullopt;
    return labels;
}

LadderResult shift_j3(const CrystalLabels& labels, int delta) {
    CrystalLabels out = labels;
    out.two_j3 += delta;
    return checked(std::move(out));
}

LadderResult shift_range(const CrystalLabels& labels, int lo, int hi, int delta) {
    CrystalLabels out = labels;
    for (int l = lo; l <= hi; ++l) out.two_j_at(l) += delta;
    return checked(std::move(out));
}

void check_a_index(int i, int n) {
    if (i < 2 || i > n)
        throw std::out_of_range("A_i index " + std::to_string(i) + " outside [2, " + std::to_string(n) + "]");
}

void check_aik_index(int i, int k, int n) {
    if (i < 2 || i > n - 1 || k < i + 1 || k > n)
        throw std::out_of_range("A_{i,k} indices (" + std::to_string(i) + ", " + std::to_string(k) +
                                ") outside range for N = " + std::to_string(n));
}

}  // namespace

LadderResult apply_j_plus(const CrystalLabels& labels) { return shift_j3(labels, +2); }
LadderResult apply_j_minus(const CrystalLabels& labels) { return shift_j3(labels, -2); }

LadderResult apply_a(int i, const CrystalLabels& labels) {
    const int n = labels.chain_length();
    check_a_index(i, n);
    return shift_range(labels, i, n, -2);
}

LadderResult apply_a_dagger(int i, const CrystalLabels& labels) {
    const int n = labels.chain_length();
    check_a_index(i, n);
    return shift_range(labels, i, n, +2);
}

LadderResult apply_a_ik(int i, int k, const CrystalLabels& labels) {
    check_aik_index(i, k, labels.chain_length());
    return shift_range(labels, i, k - 1, -2);
}

LadderResult apply_a_ik_dagger(int i, int k, const CrystalLabels& labels) {
    check_aik_index(i, k, labels.chain_length());
    return shift_range(labels, i, k - 1, +2);
}

LadderResult apply_step(const LadderStep& step, const CrystalLabels& labels) {
    switch (step.op) {
        case LadderOp::JPlus: return apply_j_plus(labels);
        case LadderOp::JMinus: return apply_j_minus(labels);
        case LadderOp::A: return apply_a(step.i, labels);
        case LadderOp::ADagger: return apply_a_dagger(step.i, labels);
        case LadderOp::AIK: return apply_a_ik(step.i, step.k, labels);
        case LadderOp::AIKDagger: return apply_a_ik_dagger(step.i, step.k, labels);
    }
    return std::nullopt;
}

LadderResult apply_chain(const OperatorChain& chain, const CrystalLabels& labels) {
    LadderResult current = labels;
    for (auto it = chain.rbegin(); it != chain.rend() && current; ++it) current = apply_step(*it, *current);
    return current;
}

std::string to_string(const OperatorChain& chain) {
    std::string out;
    for (const LadderStep& s : chain) {
        if (!out.empty()) out += ' ';
        switch (s.op) {
            case LadderOp::JPlus: out += "J+"; break;
            case LadderOp::JMinus: out += "J-"; break;
            case LadderOp::A: out += "A_" + std::to_string(s.i); break;
            case LadderOp::ADagger: out += "A+_" + std::to_string(s.i); break;
            case LadderOp::AIK: out += "A_" + std::to_string(s.i) + "," + std::to_string(s.k); break;
            case LadderOp::AIKDagger: out += "A+_" + std::to_string(s.i) + "," + std::to_string(s.k); break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Coupling c) {
    switch (c) {
        case Coupling::MU0: return "MU0";
        case Coupling::EPS: return "EPS";
        case Coupling::GAMMA: return "GAMMA";
        case Coupling::DELTA: return "DELTA";
        case Coupling::ETA: return "ETA";
        case Coupling::BETA: return "BETA";
    }
    return "?";
}

Coupling parse_coupling(std::string_view name) {
    for (Coupling c : kAllCouplings) {
        std::string upper(name);
        std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char ch) { return std::toupper(ch); });
        if (upper == to_string(c)) return c;
    }
    throw std::invalid_argument("unknown coupling \"" + std::string(name) + "\"");
}

double& CouplingValues::operator[](Coupling c) {
    switch (c) {
        case Coupling::MU0: return mu0;
        case Coupling::EPS: return eps;
        case Coupling::GAMMA: return gamma;
        case Coupling::DELTA: return delta;
        case Coupling::ETA: return eta;
        case Coupling::BETA: return beta;
    }
    throw std::out_of_range("coupling");
}

double CouplingValues::operator[](Coupling c) const { return const_cast<CouplingValues&>(*this)[c]; }

CouplingValues& CouplingValues::operator+=(const CouplingValues& rhs) {
    for (Coupling c : kAllCouplings) (*this)[c] += rhs[c];
    return *this;
}

void check_finite(const CouplingValues& values) {
    for (Coupling c : kAllCouplings)
        if (!std::isfinite(values[c]))
            throw std::invalid_argument("coupling " + std::string(to_string(c)) + " is not finite");
}

std::string_view to_string(TermFamily family) {
    switch (family) {
        case TermFamily::H1: return "H1";
        case TermFamily::H2: return "H2";
        case TermFamily::H3: return "H3";
        case TermFamily::H5: return "H5";
        case TermFamily::H6: return "H6";
        case TermFamily::Hamming: return "HAMMING";
    }
    return "?";
}

// ---------------------------------------------------------------------------

std::vector<TermChain> model_terms(int n) {
    using enum LadderOp;
    std::vector<TermChain> terms;
    auto pair = [&](TermFamily family, Coupling symbol, OperatorChain forward, OperatorChain adjoint) {
        terms.push_back({family, symbol, TermHalf::Forward, std::move(forward)});
        terms.push_back({family, symbol, TermHalf::Adjoint, std::move(adjoint)});
    };

    // H2: J- + J+
    pair(TermFamily::H2, Coupling::DELTA, {{JMinus}}, {{JPlus}});

    // H1: A_{i,k} J- + J+ A+_{i,k}
    for (int i = 2; i <= n - 1; ++i)
        for (int k = i + 1; k <= n; ++k)
            pair(TermFamily::H1, Coupling::GAMMA, {{AIK, i, k}, {JMinus}}, {{JPlus}, {AIKDagger, i, k}});

    // H3 (H4 folded in): A_i J- + J+ A+_i
    for (int i = 2; i <= n; ++i)
        pair(TermFamily::H3, Coupling::EPS, {{A, i}, {JMinus}}, {{JPlus}, {ADagger, i}});

    // H5: J- A+_m + A_m J+
    for (int m = 2; m <= n; ++m)
        pair(TermFamily::H5, Coupling::EPS, {{JMinus}, {ADagger, m}}, {{A, m}, {JPlus}});

    // H6: A_{i,k} J- A+_{k+1} + A+_{i,k} A_{k+1} J+
    for (int i = 2; i <= n - 2; ++i)
        for (int k = i + 1; k <= n - 1; ++k)
            pair(TermFamily::H6, Coupling::ETA, {{AIK, i, k}, {JMinus}, {ADagger, k + 1}},
                 {{AIKDagger, i, k}, {A, k + 1}, {JPlus}});

    return terms;
}

SymbolicHamiltonian::SymbolicHamiltonian(int n, Eigen::VectorXi diagonal)
    : n_(n), diagonal_(std::move(diagonal)) {
    for (auto& k : coefficients_) k.resize(diagonal_.size(), diagonal_.size());
}

const SymbolicHamiltonian::Coefficients& SymbolicHamiltonian::coefficients(Coupling s) const {
    return coefficients_[static_cast<std::size_t>(s)];
}

Eigen::MatrixXi SymbolicHamiltonian::dense(Coupling s) const {
    if (s == Coupling::MU0) return Eigen::MatrixXi(diagonal_.asDiagonal());
    return Eigen::MatrixXi(coefficients(s));
}

bool SymbolicHamiltonian::has(Coupling s) const {
    if (s == Coupling::MU0) return diagonal_.any();
    return coefficients(s).nonZeros() > 0;
}

void SymbolicHamiltonian::set(Coupling s, Coefficients k) {
    if (s == Coupling::MU0) throw std::invalid_argument("MU0 is carried by the diagonal");
    if (k.rows() != dim() || k.cols() != dim()) throw std::invalid_argument("coefficient matrix has wrong shape");
    k.makeCompressed();
    coefficients_[static_cast<std::size_t>(s)] = std::move(k);
}

std::vector<SymbolicEntry> SymbolicHamiltonian::entries() const {
    std::vector<SymbolicEntry> out;
    for (Coupling s : kAllCouplings) {
        if (s == Coupling::MU0) continue;
        const auto& k = coefficients(s);
        for (Eigen::Index r = 0; r < k.outerSize(); ++r)
            for (Coefficients::InnerIterator it(k, r); it; ++it)
                if (it.value() != 0)
                    out.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), s, it.value()});
    }
    std::sort(out.begin(), out.end(), [](const SymbolicEntry& x, const SymbolicEntry& y) {
        return std::tuple(x.row, x.col, x.symbol) < std::tuple(y.row, y.col, y.symbol);
    });
    return out;
}

namespace {

Eigen::VectorXi field_diagonal(const BasisMap& basis) {
    Eigen::VectorXi d(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t s = 0; s < basis.size(); ++s) d(static_cast<Eigen::Index>(s)) = basis[s].labels.two_j3;
    return d;
}

using Triplets = std::array<std::vector<Eigen::Triplet<int>>, kCouplingCount>;

SymbolicHamiltonian assemble(const BasisMap& basis, Eigen::VectorXi diagonal, const Triplets& triplets) {
    SymbolicHamiltonian sym(basis.chain_length(), std::move(diagonal));
    for (Coupling s : kAllCouplings) {
        const auto& list = triplets[static_cast<std::size_t>(s)];
        if (list.empty() || s == Coupling::MU0) continue;
        SymbolicHamiltonian::Coefficients k(sym.dim(), sym.dim());
        k.setFromTriplets(list.begin(), list.end());
        sym.set(s, std::move(k));
    }
    return sym;
}

}  // namespace

SymbolicHamiltonian build_model(const BasisMap& basis, const BuildOptions& options) {
    const std::vector<TermChain> terms = model_terms(basis.chain_length());
    Triplets triplets;
    for (std::size_t in = 0; in < basis.size(); ++in) {
        const CrystalLabels& labels = basis[in].labels;
        for (const TermChain& term : terms) {
            if (options.only_half && *options.only_half != term.half) continue;
            LadderResult out = apply_chain(term.chain, labels);
            if (!out) continue;
            const auto row = static_cast<int>(basis.index_of(*out));
            const auto col = static_cast<int>(in);
            triplets[static_cast<std::size_t>(term.symbol)].emplace_back(row, col, 1);
            if (options.provenance) ++(*options.provenance)[{row, col}][term.family];
        }
    }
    SymbolicHamiltonian sym = assemble(basis, field_diagonal(basis), triplets);
    if (!options.only_half) {
        for (Coupling s : kAllCouplings) {
            if (s == Coupling::MU0 || !sym.has(s)) continue;
            const auto& k = sym.coefficients(s);
            SymbolicHamiltonian::Coefficients diff = k - SymbolicHamiltonian::Coefficients(k.transpose());
            diff.prune(0);
            if (diff.nonZeros() > 0)
                throw std::logic_error("coefficient matrix for " + std::string(to_string(s)) + " is not symmetric");
        }
    }
    return sym;
}

SymbolicHamiltonian build_model(int n, const BuildOptions& options) {
    return build_model(enumerate_basis(n, options.max_n), options);
}

SymbolicHamiltonian build_hamming(const BasisMap& basis, bool with_field) {
    Triplets triplets;
    auto& beta = triplets[static_cast<std::size_t>(Coupling::BETA)];
    for (std::size_t in = 0; in < basis.size(); ++in) {
        const SpinWord& word = basis[in].word;
        for (int pos = 0; pos < word.size(); ++pos)
            beta.emplace_back(static_cast<int>(basis.index_of(word.with_flip(pos))), static_cast<int>(in), 1);
    }
    Eigen::VectorXi diagonal =
        with_field ? field_diagonal(basis) : Eigen::VectorXi::Zero(static_cast<Eigen::Index>(basis.size()));
    return assemble(basis, std::move(diagonal), triplets);
}

SymbolicHamiltonian build_hamming(int n, bool with_field, int max_n) {
    return build_hamming(enumerate_basis(n, max_n), with_field);
}

std::vector<std::size_t> allowed_transitions(const SymbolicHamiltonian& sym, std::size_t state) {
    if (static_cast<Eigen::Index>(state) >= sym.dim()) throw std::out_of_range("state index outside basis");
    std::vector<std::size_t> out;
    for (Coupling s : kAllCouplings) {
        if (s == Coupling::MU0 || !sym.has(s)) continue;
        // symmetric, so row `state` lists the (f, state) column entries
        const auto& k = sym.coefficients(s);
        for (SymbolicHamiltonian::Coefficients::InnerIterator it(k, static_cast<Eigen::Index>(state)); it; ++it)
            if (it.value() != 0 && static_cast<std::size_t>(it.col()) != state)
                out.push_back(static_cast<std::size_t>(it.col()));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string symbolic_dump(const SymbolicHamiltonian& sym) {
    struct Line {
        int row, col;
        Coupling symbol;
        int value;
    };
    std::vector<Line> lines;
    for (Eigen::Index r = 0; r < sym.dim(); ++r)
        if (sym.diagonal()(r) != 0)
            lines.push_back({static_cast<int>(r), static_cast<int>(r), Coupling::MU0, sym.diagonal()(r)});
    for (const SymbolicEntry& e : sym.entries()) lines.push_back({e.row, e.col, e.symbol, e.multiplicity});
    std::sort(lines.begin(), lines.end(), [](const Line& x, const Line& y) {
        return std::tuple(x.row, x.col, x.symbol) < std::tuple(y.row, y.col, y.symbol);
    });
    std::ostringstream os;
    for (const Line& l : lines) os << l.row + 1 << ' ' << l.col + 1 << ' ' << to_string(l.symbol) << ' ' << l.value << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------

TermFamily MutationContext::family() const {
    if (r_l == y_r) return r_l == 0 ? TermFamily::H2 : TermFamily::H1;
    if (r_l > y_r) return TermFamily::H3;
    return r_l == 0 ? TermFamily::H5 : TermFamily::H6;
}

MutationContext mutation_context(const SpinWord& word, int position) {
    if (position < 1 || position > word.size())
        throw std::out_of_range("position " + std::to_string(position) + " outside [1, " +
                                std::to_string(word.size()) + "]");
    MutationContext ctx;
    ctx.position = position;
    ctx.from = word[position - 1];

    ReductionState left;
    for (int p = 0; p < position - 1; ++p) left.push(word[p]);
    ReductionState right;
    for (int p = position; p < word.size(); ++p) right.push(word[p]);
    ctx.r_l = left.b;
    ctx.y_r = right.a;

    if (ctx.from == Spin::R) {
        ctx.r_in = ctx.r_l + 1;
        ctx.y_in = ctx.y_r;
        ctx.r_fi = ctx.r_in - 1;
        ctx.y_fi = ctx.y_in + 1;
    } else {
        ctx.r_in = ctx.r_l;
        ctx.y_in = ctx.y_r + 1;
        ctx.r_fi = ctx.r_in + 1;
        ctx.y_fi = ctx.y_in - 1;
    }
    return ctx;
}

}  // namespace crystalchain
