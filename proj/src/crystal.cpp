#include "crystalchain/crystal.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace crystalchain {

SpinWord::SpinWord(std::vector<Spin> spins) : spins_(std::move(spins)) {}

SpinWord SpinWord::parse(std::string_view text) {
    std::vector<Spin> spins;
    spins.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case 'R': case 'r': case '1': case '+':
                spins.push_back(Spin::R);
                break;
            case 'Y': case 'y': case '0': case '-':
                spins.push_back(Spin::Y);
                break;
            default:
                throw std::invalid_argument("invalid spin symbol '" + std::string(1, c) +
                                            "' in word \"" + std::string(text) + "\"");
        }
    }
    if (spins.empty()) throw std::invalid_argument("empty word");
    return SpinWord(std::move(spins));
}

SpinWord SpinWord::from_bits(std::uint32_t bits, int n) {
    std::vector<Spin> spins(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) spins[static_cast<std::size_t>(i)] = ((bits >> i) & 1u) ? Spin::Y : Spin::R;
    return SpinWord(std::move(spins));
}

std::uint32_t SpinWord::bits() const {
    std::uint32_t out = 0;
    for (int i = 0; i < size(); ++i)
        if ((*this)[i] == Spin::Y) out |= (1u << i);
    return out;
}

SpinWord SpinWord::with_flip(int pos) const {
    SpinWord out = *this;
    out.spins_.at(static_cast<std::size_t>(pos)) = flipped(out.spins_[static_cast<std::size_t>(pos)]);
    return out;
}

SpinWord SpinWord::prefix(int len) const {
    return SpinWord(std::vector<Spin>(spins_.begin(), spins_.begin() + len));
}

int SpinWord::count(Spin s) const {
    return static_cast<int>(std::count(spins_.begin(), spins_.end(), s));
}

std::string SpinWord::str() const {
    std::string out;
    out.reserve(spins_.size());
    for (Spin s : spins_) out.push_back(s == Spin::R ? 'R' : 'Y');
    return out;
}

CrystalLabels labels_from_word(const SpinWord& word) {
    if (word.size() < kMinChainLength)
        throw std::invalid_argument("words need at least two sites to carry labels");
    CrystalLabels labels;
    labels.two_j.reserve(static_cast<std::size_t>(word.size() - 1));
    ReductionState state;
    for (int pos = 0; pos < word.size(); ++pos) {
        state.push(word[pos]);
        if (pos >= 1) labels.two_j.push_back(state.two_j());
    }
    labels.two_j3 = word.count(Spin::R) - word.count(Spin::Y);
    return labels;
}

bool validate_labels(int two_j3, std::span<const int> two_j) {
    if (two_j.empty()) return false;
    if (two_j.front() != 0 && two_j.front() != 2) return false;
    for (std::size_t l = 0; l < two_j.size(); ++l) {
        if (two_j[l] < 0) return false;
        if (l > 0 && std::abs(two_j[l] - two_j[l - 1]) != 1) return false;
    }
    const int top = two_j.back();
    return std::abs(two_j3) <= top && (top - two_j3) % 2 == 0;
}

SpinWord word_from_labels(const CrystalLabels& labels) {
    if (!validate_labels(labels))
        throw std::invalid_argument("inadmissible labels: " + format_labels(labels));
    const int n = labels.chain_length();
    std::vector<Spin> spins(static_cast<std::size_t>(n));
    int a = (labels.two_j_top() - labels.two_j3) / 2;
    int b = (labels.two_j_top() + labels.two_j3) / 2;
    // J^1 = 1/2 for the single-site prefix.
    auto prev_two_j = [&](int i) { return i == 2 ? 1 : labels.two_j_at(i - 1); };
    for (int i = n; i >= 2; --i) {
        Spin& letter = spins[static_cast<std::size_t>(i - 1)];
        if (prev_two_j(i) == labels.two_j_at(i) + 1) {
            letter = Spin::Y;  // cancels a free R on its left
            ++b;
        } else if (b >= 1) {
            letter = Spin::R;
            --b;
        } else {
            letter = Spin::Y;
            --a;
        }
        if (a < 0) throw std::invalid_argument("labels do not reduce to a word: " + format_labels(labels));
    }
    if (a + b != 1) throw std::invalid_argument("labels do not reduce to a word: " + format_labels(labels));
    spins[0] = b == 1 ? Spin::R : Spin::Y;
    return SpinWord(std::move(spins));
}

int contracted_couples(const CrystalLabels& labels) {
    return (labels.chain_length() - labels.two_j_top()) / 2;
}

int hamming_distance(const SpinWord& lhs, const SpinWord& rhs) {
    if (lhs.size() != rhs.size())
        throw std::invalid_argument("hamming distance needs words of equal length");
    int d = 0;
    for (int i = 0; i < lhs.size(); ++i) d += lhs[i] != rhs[i];
    return d;
}

std::string format_labels(const CrystalLabels& labels) {
    std::string out = "J3=" + std::to_string(labels.two_j3) + "/2; J^2..J^N=";
    for (std::size_t l = 0; l < labels.two_j.size(); ++l) {
        if (l) out += ',';
        out += std::to_string(labels.two_j[l]) + "/2";
    }
    return out;
}

namespace {

int parse_half(std::string_view& text) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr == text.data() + text.size() || *ptr != '/' ||
        ptr + 1 == text.data() + text.size() || ptr[1] != '2')
        throw std::invalid_argument("malformed label value in \"" + std::string(text) + "\"");
    text.remove_prefix(static_cast<std::size_t>(ptr + 2 - text.data()));
    return value;
}

void expect(std::string_view& text, std::string_view token) {
    if (!text.starts_with(token))
        throw std::invalid_argument("expected \"" + std::string(token) + "\" in label text");
    text.remove_prefix(token.size());
}

}  // namespace

CrystalLabels parse_labels(std::string_view text) {
    CrystalLabels labels;
    expect(text, "J3=");
    labels.two_j3 = parse_half(text);
    expect(text, "; J^2..J^N=");
    labels.two_j.push_back(parse_half(text));
    while (!text.empty()) {
        expect(text, ",");
        labels.two_j.push_back(parse_half(text));
    }
    return labels;
}

bool canonical_less(const CrystalLabels& lhs, const CrystalLabels& rhs) {
    if (lhs.two_j.size() != rhs.two_j.size()) return lhs.two_j.size() < rhs.two_j.size();
    for (std::size_t l = lhs.two_j.size(); l-- > 0;)
        if (lhs.two_j[l] != rhs.two_j[l]) return lhs.two_j[l] < rhs.two_j[l];
    return lhs.two_j3 < rhs.two_j3;
}

void check_chain_length(int n, int max_n) {
    if (max_n > 24) throw std::invalid_argument("maximum chain length is capped at 24");
    if (n < kMinChainLength || n > max_n)
        throw std::invalid_argument("chain length " + std::to_string(n) + " outside [" +
                                    std::to_string(kMinChainLength) + ", " + std::to_string(max_n) + "]");
}

BasisMap enumerate_basis(int n, int max_n) {
    check_chain_length(n, max_n);
    const std::uint32_t dim = 1u << n;
    BasisMap basis;
    basis.n_ = n;
    basis.states_.reserve(dim);
    for (std::uint32_t bits = 0; bits < dim; ++bits) {
        SpinWord word = SpinWord::from_bits(bits, n);
        CrystalLabels labels = labels_from_word(word);
        basis.states_.push_back({std::move(word), std::move(labels)});
    }
    std::sort(basis.states_.begin(), basis.states_.end(),
              [](const BasisState& x, const BasisState& y) { return canonical_less(x.labels, y.labels); });
    basis.by_bits_.resize(dim);
    for (std::size_t i = 0; i < basis.states_.size(); ++i) {
        basis.by_bits_[basis.states_[i].word.bits()] = i;
        basis.by_labels_.emplace(basis.states_[i].labels, i);
    }
    return basis;
}

std::size_t BasisMap::index_of(const CrystalLabels& labels) const {
    auto it = by_labels_.find(labels);
    if (it == by_labels_.end()) throw std::out_of_range("labels not in basis: " + format_labels(labels));
    return it->second;
}

std::size_t BasisMap::index_of(const SpinWord& word) const {
    if (word.size() != n_) throw std::out_of_range("word length does not match basis: " + word.str());
    return by_bits_[word.bits()];
}

}  // namespace crystalchain
