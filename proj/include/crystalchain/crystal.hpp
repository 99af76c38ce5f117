#pragma once

// Words over {R, Y} and their crystal-basis labels.
//
// A word of length N is a vector of the N-fold tensor product of the
// spin-1/2 crystal. It is labelled by 2*J3 and by the chain of intermediate
// irreps 2*J^2, ..., 2*J^N. All label arithmetic uses doubled integers.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace crystalchain {

inline constexpr int kMinChainLength = 2;
inline constexpr int kDefaultMaxChainLength = 14;

/// Purine R is spin up (+1/2), pyrimidine Y is spin down (-1/2).
enum class Spin : std::uint8_t { R, Y };

constexpr Spin flipped(Spin s) { return s == Spin::R ? Spin::Y : Spin::R; }
constexpr int two_spin(Spin s) { return s == Spin::R ? 1 : -1; }

class SpinWord {
public:
    SpinWord() = default;
    explicit SpinWord(std::vector<Spin> spins);

    /// Parses R/Y, 1/0 or +/- (mixing is allowed). Throws std::invalid_argument.
    static SpinWord parse(std::string_view text);

    /// Bit i of `bits` (least significant = first site) set means Y.
    static SpinWord from_bits(std::uint32_t bits, int n);
    std::uint32_t bits() const;

    int size() const { return static_cast<int>(spins_.size()); }
    Spin operator[](int pos) const { return spins_[static_cast<std::size_t>(pos)]; }
    std::span<const Spin> spins() const { return spins_; }

    SpinWord with_flip(int pos) const;
    SpinWord prefix(int len) const;

    int count(Spin s) const;

    /// Canonical R/Y text.
    std::string str() const;

    auto operator<=>(const SpinWord&) const = default;

private:
    std::vector<Spin> spins_;
};

/// (2*J3; 2*J^2, ..., 2*J^N). `two_j` holds N-1 entries, entry 0 is 2*J^2.
struct CrystalLabels {
    int two_j3 = 0;
    std::vector<int> two_j;

    int chain_length() const { return static_cast<int>(two_j.size()) + 1; }
    /// 2*J^i for 2 <= i <= N.
    int two_j_at(int i) const { return two_j[static_cast<std::size_t>(i - 2)]; }
    int& two_j_at(int i) { return two_j[static_cast<std::size_t>(i - 2)]; }
    int two_j_top() const { return two_j.back(); }

    auto operator<=>(const CrystalLabels&) const = default;
};

/// Uncancelled symbols of a scanned word: `a` free Y, `b` free R.
struct ReductionState {
    int a = 0;
    int b = 0;

    void push(Spin s) {
        if (s == Spin::R) {
            ++b;
        } else if (b > 0) {
            --b;
        } else {
            ++a;
        }
    }
    int two_j() const { return a + b; }
    int net_two_spin() const { return b - a; }
};

CrystalLabels labels_from_word(const SpinWord& word);

/// Throws std::invalid_argument when `labels` is not admissible.
SpinWord word_from_labels(const CrystalLabels& labels);

bool validate_labels(int two_j3, std::span<const int> two_j);
inline bool validate_labels(const CrystalLabels& labels) {
    return validate_labels(labels.two_j3, labels.two_j);
}

/// Number of contracted RY couples, (N - 2*J^N) / 2.
int contracted_couples(const CrystalLabels& labels);

int hamming_distance(const SpinWord& lhs, const SpinWord& rhs);

/// "J3=<p>/2; J^2..J^N=<q2>/2,...,<qN>/2"
std::string format_labels(const CrystalLabels& labels);
CrystalLabels parse_labels(std::string_view text);

struct BasisState {
    SpinWord word;
    CrystalLabels labels;
};

/// Ascending on (2J^N, 2J^{N-1}, ..., 2J^2, 2J3).
bool canonical_less(const CrystalLabels& lhs, const CrystalLabels& rhs);

/// All 2^n words in canonical order with reverse lookups.
class BasisMap {
public:
    int chain_length() const { return n_; }
    std::size_t size() const { return states_.size(); }
    const BasisState& operator[](std::size_t index) const { return states_[index]; }
    const std::vector<BasisState>& states() const { return states_; }

    /// Throws std::out_of_range for labels outside the basis.
    std::size_t index_of(const CrystalLabels& labels) const;
    std::size_t index_of(const SpinWord& word) const;

private:
    friend BasisMap enumerate_basis(int n, int max_n);

    int n_ = 0;
    std::vector<BasisState> states_;
    std::vector<std::size_t> by_bits_;
    std::map<CrystalLabels, std::size_t> by_labels_;
};

/// Throws std::invalid_argument unless kMinChainLength <= n <= max_n.
BasisMap enumerate_basis(int n, int max_n = kDefaultMaxChainLength);

void check_chain_length(int n, int max_n = kDefaultMaxChainLength);

}  // namespace crystalchain
