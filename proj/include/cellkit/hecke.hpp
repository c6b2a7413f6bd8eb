#pragma once

#include "cellkit/coxeter.hpp"
#include "cellkit/laurent.hpp"

#include <filesystem>
#include <utility>
#include <vector>

namespace cellkit {

// Basis tag for Hecke algebra elements. Arithmetic across different
// bases is rejected; conversion goes through KLTable.
enum class HBasis { standard, kl, dual_kl };

const char* basis_name(HBasis b);

// An element of the Hecke algebra over Z[v, v^-1], stored as a sparse
// coefficient vector against one fixed basis. Term order is ascending
// element id; zero coefficients are never stored.
class HeckeElt {
public:
    using Term = std::pair<ElementId, Laurent>;

    HeckeElt() = default; // zero of unspecified rank; compatible with anything
    HeckeElt(HBasis basis, int rank);

    HBasis basis() const { return basis_; }
    int rank() const { return rank_; }
    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }

    Laurent coeff(Element x) const;
    Laurent coeff_id(ElementId id) const;

    // Accumulate c into the coefficient of x (erases the slot when the
    // sum is zero).
    void add_term(ElementId id, const Laurent& c);

    HeckeElt& operator+=(const HeckeElt& rhs);
    HeckeElt& operator-=(const HeckeElt& rhs);
    // *this += c * rhs
    void add_scaled(const HeckeElt& rhs, const Laurent& c);
    HeckeElt& scale(const Laurent& c);

    friend HeckeElt operator+(HeckeElt a, const HeckeElt& b) { return a += b; }
    friend HeckeElt operator-(HeckeElt a, const HeckeElt& b) { return a -= b; }
    friend bool operator==(const HeckeElt& a, const HeckeElt& b);
    friend bool operator!=(const HeckeElt& a, const HeckeElt& b) { return !(a == b); }

private:
    HBasis basis_ = HBasis::standard;
    std::uint8_t rank_ = 0; // 0 = unattached zero
    std::vector<Term> terms_;

    void adopt_or_check(const HeckeElt& rhs);
    friend class HeckeAlgebra;
    friend class KLTable;
};

// Multiplication and the bar involution in the standard basis.
// Normalization: H_x H_y = H_{xy} when lengths add, and
// H_s H_s = H_e + (v^-1 - v) H_s.
class HeckeAlgebra {
public:
    explicit HeckeAlgebra(const SymmetricGroup& group) : group_(&group) {}

    const SymmetricGroup& group() const { return *group_; }

    HeckeElt zero(HBasis basis = HBasis::standard) const;
    HeckeElt unit(HBasis basis = HBasis::standard) const; // basis vector at e
    HeckeElt basis_vector(HBasis basis, Element x, Laurent c = Laurent(1)) const;

    // a * H_{s_i} and H_{s_i} * a (standard basis).
    HeckeElt multiply_generator_right(const HeckeElt& a, int i) const;
    HeckeElt multiply_generator_left(int i, const HeckeElt& a) const;

    // General product of standard-basis elements, by reduced-word
    // decomposition of the right factor with prefix memoization.
    HeckeElt multiply(const HeckeElt& a, const HeckeElt& b) const;

    // Bar involution: v -> v^-1, H_x -> (H_{x^-1})^-1, computed by
    // multiplying bar(H_s) = H_s + (v - v^-1) H_e along the canonical
    // word of each basis element.
    HeckeElt bar(const HeckeElt& a) const;

private:
    const SymmetricGroup* group_;
    void check_standard(const HeckeElt& a) const;
};

// The full Kazhdan-Lusztig table of a symmetric group: the coefficients
// h_{x,y} of underline-H_y = sum_x h_{x,y} H_x, stored column-wise.
//
// Invariants: h_{y,y} = 1; h_{x,y} nonzero only for x <= y in Bruhat
// order, with min degree >= 1 off the diagonal; every column is
// bar-invariant as an element of the algebra.
class KLTable {
public:
    struct ComputeOptions {
        int threads = 0; // 0 = std::thread::hardware_concurrency()
    };

    // Builds the table bottom-up in length order via the recursion
    //   underline-H_w = underline-H_s * underline-H_{sw}
    //                   - sum_{z : sz < z} mu(z, sw) underline-H_z
    // with s the first letter of the canonical word of w. Columns within
    // one length stratum may be computed on worker threads; the result
    // is identical regardless of scheduling.
    static KLTable compute(const SymmetricGroup& group, const ComputeOptions& opts);
    static KLTable compute(const SymmetricGroup& group) {
        return compute(group, ComputeOptions{});
    }

    const SymmetricGroup& group() const { return *group_; }
    int rank() const { return group_->rank(); }

    // h_{x,y}; the zero polynomial when the entry is absent.
    const Laurent& entry(Element x, Element y) const;
    // Coefficient of v^1 in h_{x,y}.
    Int mu(Element x, Element y) const;

    // Column of y: (id of x, h_{x,y}) with ids ascending.
    const std::vector<std::pair<ElementId, Laurent>>& column(Element y) const;
    // Ids of all y with h_{x,y} != 0, ascending.
    const std::vector<ElementId>& row_support(Element x) const;

    // underline-H_y in the standard basis.
    HeckeElt kl_basis(Element y) const;
    // hat-H_x in the standard basis, by back-substitution from the top
    // of the Bruhat order.
    HeckeElt dual_basis(Element x) const;

    // Basis conversions (linear, exact).
    HeckeElt from_kl(const HeckeElt& a) const;   // kl -> standard
    HeckeElt to_kl(const HeckeElt& a) const;     // standard -> kl
    HeckeElt from_dual(const HeckeElt& a) const; // dual_kl -> standard
    HeckeElt to_dual(const HeckeElt& a) const;   // standard -> dual_kl

    // Structure constants: underline-H_x * underline-H_y expanded in the
    // KL basis.
    HeckeElt kl_product(Element x, Element y) const;

    // Text format: header `KLCACHE v1 typeA rank=<n> convention=soergel`,
    // then one `word_x|word_y|poly` line per nonzero entry, ordered by
    // (canonical_word(x), canonical_word(y)) lexicographically.
    std::string serialize() const;
    // Text persistence in the serialize() format. Writes are atomic
    // (temporary file + rename). load() re-validates every invariant.
    void save(const std::filesystem::path& path) const;
    static KLTable load(const std::filesystem::path& path, const SymmetricGroup& group);

    friend bool operator==(const KLTable& a, const KLTable& b);

private:
    explicit KLTable(const SymmetricGroup& group);

    const SymmetricGroup* group_;
    std::vector<std::vector<std::pair<ElementId, Laurent>>> cols_; // by id of y
    std::vector<std::vector<ElementId>> rows_;                     // by id of x

    void build_rows();
    void validate_invariants() const;
    friend class HeckeAlgebra;
};

// Loads the table for `group` from `<dir>/<cache_file_name(rank)>` when
// present, otherwise computes it and saves it there. An empty dir means
// no caching. Returns whether the table came from disk via *from_cache.
KLTable cached_kl_table(const SymmetricGroup& group, const std::filesystem::path& dir,
                        const KLTable::ComputeOptions& opts = {}, bool* from_cache = nullptr);
std::string cache_file_name(int rank);

} // namespace cellkit
