#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cellkit {

using ElementId = std::uint32_t;

// A word in the simple transpositions, stored as letters 1..n-1.
// The empty word is the identity.
using Word = std::vector<int>;

// A group element, identified by the lexicographic rank of its one-line
// notation within its symmetric group. Cheap to copy and hash; all real
// data lives in the owning SymmetricGroup.
struct Element {
    std::uint8_t rank = 0; // n of the ambient S_n
    ElementId id = 0;      // lex rank of the one-line permutation

    friend bool operator==(const Element&, const Element&) = default;
    friend auto operator<=>(const Element&, const Element&) = default;
};

// S_n as a Coxeter group of type A_{n-1}, with every element enumerated
// and the generator-multiplication tables precomputed. Supports ranks
// 1..7 (up to 5040 elements).
//
// Conventions, fixed once and used everywhere:
//  * One-line notation: x is stored as (x(1), ..., x(n)).
//  * Composition: (x*y)(i) = x(y(i)).
//  * s_i swaps i and i+1. Right multiplication by s_i swaps the entries
//    in positions i, i+1; left multiplication swaps the values i, i+1.
//  * length = number of inversions = reduced word length.
//  * canonical_word(x) is the lexicographically least reduced word,
//    obtained by repeatedly splitting off the smallest left descent.
//  * Elements sort by (length, canonical word); elements_by_length and
//    order_index expose that total order.
class SymmetricGroup {
public:
    static constexpr int kMaxRank = 7;

    explicit SymmetricGroup(int rank);

    int rank() const { return n_; }
    std::size_t size() const { return elems_.size(); }

    Element identity() const { return {static_cast<std::uint8_t>(n_), 0}; }
    Element longest() const { return {static_cast<std::uint8_t>(n_), static_cast<ElementId>(size() - 1)}; }
    Element simple(int i) const; // s_i for 1 <= i <= rank-1

    Element element(ElementId id) const;
    Element from_one_line(const std::vector<int>& perm) const;
    std::vector<int> one_line(Element x) const;

    int length(Element x) const;
    Element inverse(Element x) const;
    Element multiply(Element x, Element y) const;
    Element multiply_simple_right(Element x, int i) const; // x * s_i
    Element multiply_simple_left(int i, Element x) const;  // s_i * x

    bool has_left_descent(Element x, int i) const;  // l(s_i x) < l(x)
    bool has_right_descent(Element x, int i) const; // l(x s_i) < l(x)
    int first_left_descent(Element x) const;        // 0 for the identity
    int first_right_descent(Element x) const;

    const Word& canonical_word(Element x) const;
    Element from_word(const Word& w) const;

    // Bruhat order, decided via rank-matrix dominance.
    bool bruhat_leq(Element x, Element y) const;

    bool is_involution(Element x) const;
    std::vector<Element> involutions() const; // sorted by (length, word)

    // x -> w_0 x w_0, the diagram automorphism of type A.
    Element diagram_conjugate(Element x) const;

    // Shape of the RSK insertion tableau of x, as a weakly decreasing
    // partition of n.
    std::vector<int> rsk_shape(Element x) const;

    // All n! elements sorted by (length, canonical word).
    const std::vector<Element>& elements_by_length() const { return by_length_; }
    // Position of x in elements_by_length().
    std::size_t order_index(Element x) const;

    // Standard parabolic subgroup W_I for I = { s_i : i in gens }.
    struct Parabolic {
        std::vector<int> generators;  // sorted
        std::vector<Element> members; // sorted by (length, word)
        Element longest;              // longest element of W_I
    };
    Parabolic parabolic(const std::vector<int>& gens) const;
    bool in_parabolic(Element x, const std::vector<int>& gens) const;

    // For x in W_I: the element x * w_0^I * w_0, where w_0^I is the
    // longest element of W_I and w_0 the longest of the full group.
    // Throws user_error when x lies outside W_I.
    Element parabolic_lift(Element x, const std::vector<int>& gens) const;

    // Word text form: letters joined by commas ("1,2,1"); the empty
    // string is the empty word.
    static Word parse_word(std::string_view text);
    static std::string word_str(const Word& w);

private:
    struct ElementData {
        std::array<std::uint8_t, kMaxRank> perm{}; // one-line, values 1..n
        std::uint8_t length = 0;
        std::uint8_t left_desc = 0;  // bit i-1 set iff s_i is a left descent
        std::uint8_t right_desc = 0; // bit i-1 set iff s_i is a right descent
        ElementId inverse = 0;
        Word canonical;
    };

    int n_;
    std::array<std::uint32_t, kMaxRank + 1> fact_{};
    std::vector<ElementData> elems_;
    // step tables: [id][i-1] -> id of x*s_i (right) or s_i*x (left)
    std::vector<std::array<ElementId, kMaxRank - 1>> right_step_;
    std::vector<std::array<ElementId, kMaxRank - 1>> left_step_;
    std::vector<Element> by_length_;
    std::vector<std::uint32_t> order_index_;

    ElementId lehmer_rank(const std::uint8_t* perm) const;
    void check_element(Element x) const;
    void check_generator(int i) const;
    std::vector<int> generator_blocks(const std::vector<int>& gens) const;
};

} // namespace cellkit
