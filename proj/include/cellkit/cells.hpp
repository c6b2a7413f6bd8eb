#pragma once

#include "cellkit/hecke.hpp"

#include <utility>
#include <vector>

namespace cellkit {

enum class Side { left, right };

// Partition of S_n into left or right cells, together with the partial
// order the preorder induces on cells.
//
// Orientation: x <=_R y means y appears in the KL expansion of
// underline-H_x * H for some H; equivalently y is reachable from x along
// edges given by right multiplication with the generators. The identity
// is the unique minimum. Left is the same through inverses.
//
// Cell ids are assigned by first appearance over the (length, canonical
// word)-sorted element list, so they are deterministic.
class CellPartition {
public:
    static CellPartition right_cells(const KLTable& table);
    static CellPartition left_cells(const KLTable& table);
    // Computes the right partition once and transports it through
    // inversion; cheaper than two independent runs.
    static std::pair<CellPartition, CellPartition> left_and_right(const KLTable& table);

    Side side() const { return side_; }
    int rank() const { return rank_; }
    int count() const { return static_cast<int>(members_.size()); }

    int cell_of(Element x) const;
    const std::vector<Element>& members(int cell) const; // sorted (length, word)
    const std::vector<std::vector<Element>>& cells() const { return members_; }

    // Partial order on cells: cell_leq(a, b) iff every element of cell a
    // is <=_side every element of cell b.
    bool cell_leq(int a, int b) const;
    // The element preorder itself.
    bool leq(Element x, Element y) const;

private:
    Side side_ = Side::right;
    int rank_ = 0;
    std::vector<int> cell_of_;                  // by element id
    std::vector<std::vector<Element>> members_; // by cell id
    std::vector<std::vector<char>> reach_;      // reach_[a][b] = cell_leq(a, b)

    static CellPartition from_right(const KLTable& table, const CellPartition& right, Side side);
    friend struct CellPartitionBuilder;
};

// Lusztig's a-function: a(x) = max over y, z of deg k_{y,z,x}, the top
// degree over all KL structure constants landing on x.
class AFunction {
public:
    enum class Mode { exact, fast };

    // Evaluates the definition: for every y the products
    // underline-H_y * underline-H_z are expanded in the KL basis for all
    // z, tracking the maximal degree per landing element. Quadratic in
    // the group order; intended for rank <= 5 (rank 6 works but is slow
    // and sits behind an explicit CLI flag).
    static AFunction exact(const KLTable& table, int threads = 0);

    // Type A shortcut: a(x) = sum_i binom(conj(shape(x))_i, 2) over the
    // conjugate of the RSK shape of x. On the first use at rank >= 5
    // this mode validates itself against exact mode on ranks 2..4 (once
    // per process) and throws internal_error on any mismatch.
    static AFunction fast(const SymmetricGroup& group);

    Mode mode() const { return mode_; }
    int rank() const { return rank_; }
    int value(Element x) const;
    int operator()(Element x) const { return value(x); }

private:
    Mode mode_ = Mode::exact;
    int rank_ = 0;
    std::vector<int> values_; // by element id
};

// The Duflo set: all d with a(d) = mindeg h_{e,d} (the entry for d = e
// is the constant 1, of min degree 0). Checks that the set meets every
// right cell exactly once and throws internal_error otherwise. Result
// sorted by (length, canonical word).
std::vector<Element> duflo_elements(const KLTable& table, const CellPartition& right_cells,
                                    const AFunction& afn);

} // namespace cellkit
