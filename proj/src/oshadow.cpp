#include "cellkit/oshadow.hpp"

#include "cellkit/errors.hpp"

#include <algorithm>

namespace cellkit {

namespace {

Element mk(const SymmetricGroup& g, ElementId id) {
    return Element{static_cast<std::uint8_t>(g.rank()), id};
}

GradedCharacter character_from(const SymmetricGroup& g, const HeckeElt& coords) {
    GradedCharacter out;
    out.mult.reserve(coords.terms().size());
    for (const auto& [id, c] : coords.terms())
        out.mult.emplace_back(mk(g, id), c);
    std::sort(out.mult.begin(), out.mult.end(), [&](const auto& a, const auto& b) {
        return g.order_index(a.first) < g.order_index(b.first);
    });
    return out;
}

} // namespace

Laurent GradedCharacter::coeff(Element x) const {
    for (const auto& [y, c] : mult)
        if (y == x)
            return c;
    return Laurent();
}

bool GradedCharacter::bar_symmetric() const {
    for (const auto& [y, c] : mult) {
        (void)y;
        if (!(c == c.bar()))
            return false;
    }
    return true;
}

int GradedCharacter::max_degree() const {
    if (mult.empty())
        throw user_error("graded character: no terms, no degree");
    int d = mult.front().second.max_degree();
    for (const auto& [y, c] : mult) {
        (void)y;
        d = std::max(d, c.max_degree());
    }
    return d;
}

int GradedCharacter::min_degree() const {
    if (mult.empty())
        throw user_error("graded character: no terms, no degree");
    int d = mult.front().second.min_degree();
    for (const auto& [y, c] : mult) {
        (void)y;
        d = std::min(d, c.min_degree());
    }
    return d;
}

bool GradedCharacter::nonnegative() const {
    for (const auto& [y, c] : mult) {
        (void)y;
        for (const auto& [e, coeff] : c.terms()) {
            (void)e;
            if (coeff < 0)
                return false;
        }
    }
    return true;
}

GradedCharacter verma_character(const KLTable& table, Element y) {
    const SymmetricGroup& g = table.group();
    // [Delta(y)] = sum_z h_{y,z} [L(z)]
    GradedCharacter out;
    for (ElementId z : table.row_support(y))
        out.mult.emplace_back(mk(g, z), table.entry(y, mk(g, z)));
    std::sort(out.mult.begin(), out.mult.end(), [&](const auto& a, const auto& b) {
        return g.order_index(a.first) < g.order_index(b.first);
    });
    return out;
}

GradedCharacter theta_simple_character(const KLTable& table, Element x) {
    const SymmetricGroup& g = table.group();
    HeckeAlgebra alg(g);
    // [theta_x L(x^-1)] = hat-H_{x^-1} * underline-H_x, read off in the
    // dual KL basis.
    HeckeElt dual_std = table.dual_basis(g.inverse(x));
    HeckeElt prod = alg.multiply(dual_std, table.kl_basis(x));
    return character_from(g, table.to_dual(prod));
}

QuasiSimpleReport quasi_simple_report(const KLTable& table, const CellPartition& right_cells,
                                      const AFunction& afn, Element x) {
    const SymmetricGroup& g = table.group();
    if (right_cells.side() != Side::right)
        throw user_error("quasi_simple: needs the right cell partition");
    QuasiSimpleReport rep;
    rep.x = x;
    Element xinv = g.inverse(x);
    const int a = afn.value(xinv);
    rep.character = theta_simple_character(table, x);

    rep.symmetric = rep.character.bar_symmetric();
    rep.degree_bounded =
        !rep.character.mult.empty() && rep.character.max_degree() <= a &&
        rep.character.min_degree() >= -a;

    // (iii) within the right cell of x^-1, mindeg h_{e,y} is >= a with a
    // unique minimum — the Duflo element — where v^a has coefficient 1.
    const std::vector<Element>& cell = right_cells.members(right_cells.cell_of(xinv));
    bool bounds_ok = true;
    int minima = 0;
    Element duflo{};
    for (Element y : cell) {
        const Laurent& h = table.entry(g.identity(), y);
        int md = h.is_zero() ? 0 : h.min_degree();
        if (md < a)
            bounds_ok = false;
        if (md == a) {
            ++minima;
            duflo = y;
        }
    }
    rep.duflo = minima == 1 ? duflo : cell.front();
    rep.duflo_minimum = bounds_ok && minima == 1 &&
                        table.entry(g.identity(), rep.duflo).coeff(a) == 1;
    return rep;
}

QuasiSimpleReport quasi_simple(const KLTable& table, const CellPartition& right_cells,
                               const AFunction& afn, Element x) {
    QuasiSimpleReport rep = quasi_simple_report(table, right_cells, afn, x);
    if (!rep.all_pass())
        throw internal_error(
            "quasi_simple: graded checks failed (degree_bounded=" +
            std::string(rep.degree_bounded ? "yes" : "no") +
            ", symmetric=" + (rep.symmetric ? "yes" : "no") +
            ", duflo_minimum=" + (rep.duflo_minimum ? "yes" : "no") + ")");
    return rep;
}

} // namespace cellkit
