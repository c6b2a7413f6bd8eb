#pragma once

#include "cellkit/cells.hpp"

#include <string>
#include <vector>

namespace cellkit {

// A Z[v,v^-1]-linear combination of simple classes [L(x)]: the
// Grothendieck-group shadow of a graded module. The coefficient of v^i
// in mult(x) is the multiplicity of L(x) in graded degree i (the shift
// functor <i> acts as multiplication by v^-i).
struct GradedCharacter {
    // Sorted by (length, canonical word) of the element; no zero
    // coefficients.
    std::vector<std::pair<Element, Laurent>> mult;

    Laurent coeff(Element x) const;
    bool bar_symmetric() const; // invariant under v <-> v^-1
    // Extreme v-exponents over all coefficients; throws user_error when
    // the character is empty.
    int max_degree() const;
    int min_degree() const;
    // True when every coefficient of every multiplicity is >= 0.
    bool nonnegative() const;
};

// [Delta(y)] in the simple classes: x -> h_{y,x}.
GradedCharacter verma_character(const KLTable& table, Element y);

// [theta_x L(x^-1)]: the dual-KL coordinates of hat-H_{x^-1} *
// underline-H_x.
GradedCharacter theta_simple_character(const KLTable& table, Element x);

// Identification of the quasi-simple quotient attached to x: the Duflo
// element d of the right cell of x^-1, plus the graded checks that back
// the identification.
struct QuasiSimpleReport {
    Element x;
    Element duflo;             // d
    GradedCharacter character; // [theta_x L(x^-1)]

    // (i) every degree in the character lies within +-a(x^-1)
    bool degree_bounded = false;
    // (ii) the character is v <-> v^-1 symmetric
    bool symmetric = false;
    // (iii) over y in the right cell of x^-1: mindeg h_{e,y} >= a(x^-1),
    // with equality exactly at y = d, where the coefficient of
    // v^{a(x^-1)} is 1
    bool duflo_minimum = false;

    bool all_pass() const { return degree_bounded && symmetric && duflo_minimum; }
};

// Computes the report without judging it.
QuasiSimpleReport quasi_simple_report(const KLTable& table, const CellPartition& right_cells,
                                      const AFunction& afn, Element x);

// Same, but throws internal_error when any check fails.
QuasiSimpleReport quasi_simple(const KLTable& table, const CellPartition& right_cells,
                               const AFunction& afn, Element x);

} // namespace cellkit
