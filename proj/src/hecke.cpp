#include "cellkit/hecke.hpp"

#include "cellkit/errors.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace cellkit {

const char* basis_name(HBasis b) {
    switch (b) {
    case HBasis::standard: return "standard";
    case HBasis::kl: return "kl";
    case HBasis::dual_kl: return "dual_kl";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// HeckeElt

HeckeElt::HeckeElt(HBasis basis, int rank) : basis_(basis), rank_(static_cast<std::uint8_t>(rank)) {}

void HeckeElt::adopt_or_check(const HeckeElt& rhs) {
    if (rhs.rank_ == 0)
        return;
    if (rank_ == 0) {
        rank_ = rhs.rank_;
        basis_ = rhs.basis_;
        return;
    }
    if (rank_ != rhs.rank_)
        throw user_error("hecke: rank mismatch between operands");
    if (basis_ != rhs.basis_)
        throw user_error(std::string("hecke: basis mismatch (") + basis_name(basis_) + " vs " +
                         basis_name(rhs.basis_) + "); convert explicitly");
}

Laurent HeckeElt::coeff_id(ElementId id) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), id,
                               [](const Term& t, ElementId i) { return t.first < i; });
    if (it != terms_.end() && it->first == id)
        return it->second;
    return Laurent();
}

Laurent HeckeElt::coeff(Element x) const {
    if (rank_ != 0 && x.rank != rank_)
        throw user_error("hecke: element from a different rank");
    return coeff_id(x.id);
}

void HeckeElt::add_term(ElementId id, const Laurent& c) {
    if (c.is_zero())
        return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), id,
                               [](const Term& t, ElementId i) { return t.first < i; });
    if (it != terms_.end() && it->first == id) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    } else {
        terms_.insert(it, {id, c});
    }
}

HeckeElt& HeckeElt::operator+=(const HeckeElt& rhs) {
    adopt_or_check(rhs);
    if (rhs.terms_.empty())
        return *this;
    std::vector<Term> out;
    out.reserve(terms_.size() + rhs.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = rhs.terms_.begin(), be = rhs.terms_.end();
    while (a != ae && b != be) {
        if (a->first < b->first) {
            out.push_back(std::move(*a++));
        } else if (b->first < a->first) {
            out.push_back(*b++);
        } else {
            Laurent c = std::move(a->second);
            c += b->second;
            if (!c.is_zero())
                out.emplace_back(a->first, std::move(c));
            ++a;
            ++b;
        }
    }
    for (; a != ae; ++a)
        out.push_back(std::move(*a));
    out.insert(out.end(), b, be);
    terms_ = std::move(out);
    return *this;
}

HeckeElt& HeckeElt::operator-=(const HeckeElt& rhs) {
    HeckeElt neg = rhs;
    neg.scale(Laurent(-1));
    return *this += neg;
}

void HeckeElt::add_scaled(const HeckeElt& rhs, const Laurent& c) {
    adopt_or_check(rhs);
    if (rhs.terms_.empty() || c.is_zero())
        return;
    std::vector<Term> out;
    out.reserve(terms_.size() + rhs.terms_.size());
    auto a = terms_.begin(), ae = terms_.end();
    auto b = rhs.terms_.begin(), be = rhs.terms_.end();
    while (a != ae && b != be) {
        if (a->first < b->first) {
            out.push_back(std::move(*a++));
        } else if (b->first < a->first) {
            out.emplace_back(b->first, b->second * c);
            ++b;
        } else {
            Laurent s = std::move(a->second);
            s.add_scaled(b->second, c);
            if (!s.is_zero())
                out.emplace_back(a->first, std::move(s));
            ++a;
            ++b;
        }
    }
    for (; a != ae; ++a)
        out.push_back(std::move(*a));
    for (; b != be; ++b)
        out.emplace_back(b->first, b->second * c);
    terms_ = std::move(out);
}

HeckeElt& HeckeElt::scale(const Laurent& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (Term& t : terms_)
        t.second *= c;
    return *this;
}

bool operator==(const HeckeElt& a, const HeckeElt& b) {
    if (a.terms_.empty() && b.terms_.empty())
        return true;
    if (a.rank_ != 0 && b.rank_ != 0 && (a.rank_ != b.rank_ || a.basis_ != b.basis_))
        return false;
    return a.terms_ == b.terms_;
}

// ---------------------------------------------------------------------------
// HeckeAlgebra

void HeckeAlgebra::check_standard(const HeckeElt& a) const {
    if (a.rank_ != 0 && a.rank_ != group_->rank())
        throw user_error("hecke: element from a different rank");
    if (!a.is_zero() && a.basis_ != HBasis::standard)
        throw user_error("hecke: operation requires the standard basis");
}

HeckeElt HeckeAlgebra::zero(HBasis basis) const {
    return HeckeElt(basis, group_->rank());
}

HeckeElt HeckeAlgebra::unit(HBasis basis) const {
    return basis_vector(basis, group_->identity());
}

HeckeElt HeckeAlgebra::basis_vector(HBasis basis, Element x, Laurent c) const {
    if (x.rank != group_->rank())
        throw user_error("hecke: element from a different rank");
    HeckeElt out(basis, group_->rank());
    out.add_term(x.id, c);
    return out;
}

namespace {

// Sorts raw (id, coeff) pairs, combines equal ids, drops zeros.
std::vector<HeckeElt::Term> combine_terms(std::vector<HeckeElt::Term> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const HeckeElt::Term& a, const HeckeElt::Term& b) { return a.first < b.first; });
    std::vector<HeckeElt::Term> out;
    out.reserve(raw.size());
    for (auto& t : raw) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(std::move(t));
        if (!out.empty() && out.back().second.is_zero())
            out.pop_back();
    }
    return out;
}

} // namespace

HeckeElt HeckeAlgebra::multiply_generator_right(const HeckeElt& a, int i) const {
    check_standard(a);
    const SymmetricGroup& g = *group_;
    const Laurent vm_minus_v = Laurent::v(-1) - Laurent::v(1); // v^-1 - v
    std::vector<HeckeElt::Term> raw;
    raw.reserve(a.terms().size() * 2);
    for (const auto& [id, c] : a.terms()) {
        Element x{static_cast<std::uint8_t>(g.rank()), id};
        Element xs = g.multiply_simple_right(x, i);
        raw.emplace_back(xs.id, c);
        if (g.has_right_descent(x, i))
            raw.emplace_back(id, c * vm_minus_v);
    }
    HeckeElt out(HBasis::standard, g.rank());
    out.terms_ = combine_terms(std::move(raw));
    return out;
}

HeckeElt HeckeAlgebra::multiply_generator_left(int i, const HeckeElt& a) const {
    check_standard(a);
    const SymmetricGroup& g = *group_;
    const Laurent vm_minus_v = Laurent::v(-1) - Laurent::v(1);
    std::vector<HeckeElt::Term> raw;
    raw.reserve(a.terms().size() * 2);
    for (const auto& [id, c] : a.terms()) {
        Element x{static_cast<std::uint8_t>(g.rank()), id};
        Element sx = g.multiply_simple_left(i, x);
        raw.emplace_back(sx.id, c);
        if (g.has_left_descent(x, i))
            raw.emplace_back(id, c * vm_minus_v);
    }
    HeckeElt out(HBasis::standard, g.rank());
    out.terms_ = combine_terms(std::move(raw));
    return out;
}

HeckeElt HeckeAlgebra::multiply(const HeckeElt& a, const HeckeElt& b) const {
    check_standard(a);
    check_standard(b);
    const SymmetricGroup& g = *group_;
    // Memoize a * H_u over the right-descent recursion
    //   a * H_u = (a * H_{us}) * H_s  with  s the first right descent of u,
    // which shares prefixes between the terms of b.
    std::map<ElementId, HeckeElt> memo;
    memo.emplace(0, a);
    auto product_with = [&](ElementId u) -> const HeckeElt& {
        std::vector<ElementId> chain;
        ElementId cur = u;
        while (memo.find(cur) == memo.end()) {
            chain.push_back(cur);
            Element x{static_cast<std::uint8_t>(g.rank()), cur};
            int s = g.first_right_descent(x);
            cur = g.multiply_simple_right(x, s).id;
        }
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            Element x{static_cast<std::uint8_t>(g.rank()), *it};
            int s = g.first_right_descent(x);
            ElementId shorter = g.multiply_simple_right(x, s).id;
            memo.emplace(*it, multiply_generator_right(memo.at(shorter), s));
        }
        return memo.at(u);
    };
    HeckeElt out(HBasis::standard, g.rank());
    for (const auto& [id, c] : b.terms())
        out.add_scaled(product_with(id), c);
    return out;
}

HeckeElt HeckeAlgebra::bar(const HeckeElt& a) const {
    check_standard(a);
    const SymmetricGroup& g = *group_;
    const Laurent v_minus_vm = Laurent::v(1) - Laurent::v(-1); // v - v^-1
    HeckeElt out(HBasis::standard, g.rank());
    for (const auto& [id, c] : a.terms()) {
        // bar(H_x) = prod over the canonical word of bar(H_s),
        // bar(H_s) = H_s + (v - v^-1) H_e.
        HeckeElt t = unit();
        for (int s : g.canonical_word(Element{static_cast<std::uint8_t>(g.rank()), id})) {
            HeckeElt next = multiply_generator_right(t, s);
            next.add_scaled(t, v_minus_vm);
            t = std::move(next);
        }
        out.add_scaled(t, c.bar());
    }
    return out;
}

// ---------------------------------------------------------------------------
// KLTable

KLTable::KLTable(const SymmetricGroup& group) : group_(&group) {}

KLTable KLTable::compute(const SymmetricGroup& group, const ComputeOptions& opts) {
    KLTable table(group);
    const std::size_t n = group.size();
    table.cols_.resize(n);
    table.cols_[group.identity().id] = {{group.identity().id, Laurent(1)}};

    const auto& ordered = group.elements_by_length();
    const Laurent v1 = Laurent::v(1);
    const Laurent vm1 = Laurent::v(-1);

    // One column of the table, assuming all shorter columns are done.
    // `val`/`touched` form a per-thread dense scratch accumulator.
    auto compute_column = [&](Element w, std::vector<Laurent>& val,
                              std::vector<ElementId>& touched) {
        const int s = group.canonical_word(w).front();
        const ElementId u = group.multiply_simple_left(s, w).id;
        auto add = [&](ElementId id, const Laurent& c) {
            if (val[id].is_zero() && !c.is_zero())
                touched.push_back(id);
            val[id] += c;
        };
        // underline-H_s * underline-H_u in standard coordinates:
        // H_s H_x = H_{sx} + v^{+-1} H_x (+1 iff sx longer).
        for (const auto& [xid, h] : table.cols_[u]) {
            Element x{static_cast<std::uint8_t>(group.rank()), xid};
            Element sx = group.multiply_simple_left(s, x);
            add(sx.id, h);
            add(xid, h * (group.length(sx) > group.length(x) ? v1 : vm1));
        }
        // Correction terms: subtract mu(z, u) * underline-H_z over z < u
        // with s a left descent of z.
        for (const auto& [zid, h] : table.cols_[u]) {
            if (zid == u)
                continue;
            Int mu = h.coeff(1);
            if (mu == 0)
                continue;
            Element z{static_cast<std::uint8_t>(group.rank()), zid};
            if (!group.has_left_descent(z, s))
                continue;
            Laurent neg(-mu);
            for (const auto& [xid, hz] : table.cols_[zid])
                add(xid, hz * neg);
        }
        std::sort(touched.begin(), touched.end());
        auto& col = table.cols_[w.id];
        col.reserve(touched.size());
        for (ElementId id : touched) {
            if (!val[id].is_zero())
                col.emplace_back(id, std::move(val[id]));
            val[id] = Laurent();
        }
        touched.clear();
    };

    int threads = opts.threads > 0 ? opts.threads
                                   : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1)
        threads = 1;

    std::size_t pos = 1; // ordered[0] is the identity, already seeded
    while (pos < ordered.size()) {
        // One length stratum: columns here depend only on shorter ones,
        // so they can be filled in parallel into disjoint slots.
        std::size_t end = pos;
        const int len = group.length(ordered[pos]);
        while (end < ordered.size() && group.length(ordered[end]) == len)
            ++end;
        const std::size_t span = end - pos;
        const int workers =
            static_cast<int>(std::min(static_cast<std::size_t>(threads), span));
        if (workers == 1) {
            std::vector<Laurent> val(n);
            std::vector<ElementId> touched;
            for (std::size_t k = pos; k < end; ++k)
                compute_column(ordered[k], val, touched);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
            for (int t = 0; t < workers; ++t) {
                pool.emplace_back([&, t]() {
                    try {
                        std::vector<Laurent> val(n);
                        std::vector<ElementId> touched;
                        for (std::size_t k = pos + static_cast<std::size_t>(t); k < end;
                             k += static_cast<std::size_t>(workers))
                            compute_column(ordered[k], val, touched);
                    } catch (...) {
                        errors[static_cast<std::size_t>(t)] = std::current_exception();
                    }
                });
            }
            for (auto& th : pool)
                th.join();
            for (auto& e : errors)
                if (e)
                    std::rethrow_exception(e);
        }
        pos = end;
    }

    table.build_rows();
    return table;
}

void KLTable::build_rows() {
    rows_.assign(group_->size(), {});
    for (ElementId y = 0; y < cols_.size(); ++y)
        for (const auto& [x, h] : cols_[y]) {
            (void)h;
            rows_[x].push_back(y);
        }
}

const Laurent& KLTable::entry(Element x, Element y) const {
    static const Laurent zero;
    if (x.rank != group_->rank() || y.rank != group_->rank())
        throw user_error("kl table: element from a different rank");
    const auto& col = cols_[y.id];
    auto it = std::lower_bound(col.begin(), col.end(), x.id,
                               [](const auto& t, ElementId i) { return t.first < i; });
    if (it != col.end() && it->first == x.id)
        return it->second;
    return zero;
}

Int KLTable::mu(Element x, Element y) const {
    return entry(x, y).coeff(1);
}

const std::vector<std::pair<ElementId, Laurent>>& KLTable::column(Element y) const {
    if (y.rank != group_->rank())
        throw user_error("kl table: element from a different rank");
    return cols_[y.id];
}

const std::vector<ElementId>& KLTable::row_support(Element x) const {
    if (x.rank != group_->rank())
        throw user_error("kl table: element from a different rank");
    return rows_[x.id];
}

HeckeElt KLTable::kl_basis(Element y) const {
    HeckeElt out(HBasis::standard, group_->rank());
    out.terms_ = column(y);
    return out;
}

HeckeElt KLTable::from_kl(const HeckeElt& a) const {
    if (!a.is_zero() && a.basis() != HBasis::kl)
        throw user_error("from_kl: expected a kl-basis element");
    if (a.rank() != 0 && a.rank() != group_->rank())
        throw user_error("from_kl: rank mismatch");
    HeckeElt out(HBasis::standard, group_->rank());
    for (const auto& [y, c] : a.terms()) {
        HeckeElt col(HBasis::standard, group_->rank());
        col.terms_ = cols_[y];
        out.add_scaled(col, c);
    }
    return out;
}

HeckeElt KLTable::to_kl(const HeckeElt& a) const {
    if (!a.is_zero() && a.basis() != HBasis::standard)
        throw user_error("to_kl: expected a standard-basis element");
    if (a.rank() != 0 && a.rank() != group_->rank())
        throw user_error("to_kl: rank mismatch");
    const SymmetricGroup& g = *group_;
    const std::size_t n = g.size();
    const int max_len = g.length(g.longest());

    // Back-substitution against the unitriangular system, processed by
    // descending length so each coefficient is read off exactly once.
    std::vector<Laurent> val(n);
    std::vector<std::vector<ElementId>> bucket(static_cast<std::size_t>(max_len) + 1);
    std::vector<char> queued(n, 0);
    auto enqueue = [&](ElementId id) {
        if (!queued[id]) {
            queued[id] = 1;
            bucket[static_cast<std::size_t>(
                       g.length(Element{static_cast<std::uint8_t>(g.rank()), id}))]
                .push_back(id);
        }
    };
    for (const auto& [id, c] : a.terms()) {
        val[id] = c;
        enqueue(id);
    }
    std::vector<HeckeElt::Term> result;
    for (int len = max_len; len >= 0; --len) {
        auto& ids = bucket[static_cast<std::size_t>(len)];
        std::sort(ids.begin(), ids.end());
        for (ElementId y : ids) {
            if (val[y].is_zero())
                continue;
            Laurent c = std::move(val[y]);
            val[y] = Laurent();
            for (const auto& [x, h] : cols_[y]) {
                if (x == y)
                    continue;
                enqueue(x);
                Laurent prod = h * c;
                val[x] -= prod;
            }
            result.emplace_back(y, std::move(c));
        }
    }
    std::sort(result.begin(), result.end(),
              [](const HeckeElt::Term& s, const HeckeElt::Term& t) { return s.first < t.first; });
    HeckeElt out(HBasis::kl, g.rank());
    out.terms_ = std::move(result);
    return out;
}

HeckeElt KLTable::dual_basis(Element x) const {
    if (x.rank != group_->rank())
        throw user_error("dual_basis: element from a different rank");
    const SymmetricGroup& g = *group_;
    // hat-H_z = H_z - sum_{y > z} h_{z,y} hat-H_y, solved from the top
    // of the upper cone of x downward.
    std::vector<ElementId> cone = rows_[x.id];
    std::sort(cone.begin(), cone.end(), [&](ElementId a, ElementId b) {
        int la = g.length(Element{static_cast<std::uint8_t>(g.rank()), a});
        int lb = g.length(Element{static_cast<std::uint8_t>(g.rank()), b});
        if (la != lb)
            return la > lb;
        return a < b;
    });
    std::map<ElementId, HeckeElt> solved;
    for (ElementId z : cone) {
        HeckeElt elt(HBasis::standard, g.rank());
        elt.add_term(z, Laurent(1));
        for (ElementId y : rows_[z]) {
            if (y == z)
                continue;
            Laurent h = entry(Element{static_cast<std::uint8_t>(g.rank()), z},
                              Element{static_cast<std::uint8_t>(g.rank()), y});
            auto it = solved.find(y);
            if (it == solved.end())
                throw internal_error("dual_basis: upper cone is not closed in this table");
            elt.add_scaled(it->second, -h);
        }
        solved.emplace(z, std::move(elt));
    }
    return solved.at(x.id);
}

HeckeElt KLTable::to_dual(const HeckeElt& a) const {
    if (!a.is_zero() && a.basis() != HBasis::standard)
        throw user_error("to_dual: expected a standard-basis element");
    if (a.rank() != 0 && a.rank() != group_->rank())
        throw user_error("to_dual: rank mismatch");
    // c_z = sum_y a_y h_{y,z}, from H_y = sum_z h_{y,z} hat-H_z.
    const SymmetricGroup& g = *group_;
    std::vector<Laurent> val(g.size());
    std::vector<ElementId> touched;
    for (const auto& [y, c] : a.terms()) {
        for (ElementId z : rows_[y]) {
            const Laurent& h = entry(Element{static_cast<std::uint8_t>(g.rank()), y},
                                     Element{static_cast<std::uint8_t>(g.rank()), z});
            if (val[z].is_zero())
                touched.push_back(z);
            val[z].add_scaled(c, h);
        }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    HeckeElt out(HBasis::dual_kl, g.rank());
    for (ElementId z : touched)
        if (!val[z].is_zero())
            out.terms_.emplace_back(z, std::move(val[z]));
    return out;
}

HeckeElt KLTable::from_dual(const HeckeElt& a) const {
    if (!a.is_zero() && a.basis() != HBasis::dual_kl)
        throw user_error("from_dual: expected a dual_kl-basis element");
    if (a.rank() != 0 && a.rank() != group_->rank())
        throw user_error("from_dual: rank mismatch");
    HeckeElt out(HBasis::standard, group_->rank());
    for (const auto& [x, c] : a.terms())
        out.add_scaled(dual_basis(Element{static_cast<std::uint8_t>(group_->rank()), x}), c);
    return out;
}

HeckeElt KLTable::kl_product(Element x, Element y) const {
    HeckeAlgebra alg(*group_);
    return to_kl(alg.multiply(kl_basis(x), kl_basis(y)));
}

bool operator==(const KLTable& a, const KLTable& b) {
    return a.group_->rank() == b.group_->rank() && a.cols_ == b.cols_;
}

// ---------------------------------------------------------------------------
// Persistence
//
// Format (text, bit-exact):
//   line 1: KLCACHE v1 typeA rank=<n> convention=soergel
//   then one line per nonzero entry, ordered lexicographically by
//   (canonical_word(x), canonical_word(y)):
//   <word_x>|<word_y>|<laurent text>
// The identity's word is the empty string.

std::string KLTable::serialize() const {
    const SymmetricGroup& g = *group_;
    std::vector<ElementId> word_order(g.size());
    for (ElementId id = 0; id < g.size(); ++id)
        word_order[id] = id;
    std::sort(word_order.begin(), word_order.end(), [&](ElementId a, ElementId b) {
        return g.canonical_word(Element{static_cast<std::uint8_t>(g.rank()), a}) <
               g.canonical_word(Element{static_cast<std::uint8_t>(g.rank()), b});
    });

    std::string out = "KLCACHE v1 typeA rank=" + std::to_string(g.rank()) +
                      " convention=soergel\n";
    for (ElementId xid : word_order) {
        Element x{static_cast<std::uint8_t>(g.rank()), xid};
        std::vector<ElementId> ys = rows_[xid];
        std::sort(ys.begin(), ys.end(), [&](ElementId a, ElementId b) {
            return g.canonical_word(Element{static_cast<std::uint8_t>(g.rank()), a}) <
                   g.canonical_word(Element{static_cast<std::uint8_t>(g.rank()), b});
        });
        for (ElementId yid : ys) {
            Element y{static_cast<std::uint8_t>(g.rank()), yid};
            out += SymmetricGroup::word_str(g.canonical_word(x));
            out += '|';
            out += SymmetricGroup::word_str(g.canonical_word(y));
            out += '|';
            out += entry(x, y).str();
            out += '\n';
        }
    }
    return out;
}

void KLTable::save(const std::filesystem::path& path) const {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw user_error("cannot open '" + tmp.string() + "' for writing");
        out << serialize();
        if (!out)
            throw user_error("write failure on '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

KLTable KLTable::load(const std::filesystem::path& path, const SymmetricGroup& group) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw user_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line))
        throw parse_error("kl cache: empty file");
    const std::string prefix = "KLCACHE v1 typeA rank=";
    const std::string suffix = " convention=soergel";
    if (line.rfind(prefix, 0) != 0 || line.size() <= prefix.size() + suffix.size() ||
        line.compare(line.size() - suffix.size(), suffix.size(), suffix) != 0)
        throw parse_error("kl cache: bad header '" + line + "'");
    std::string rank_text = line.substr(prefix.size(), line.size() - prefix.size() - suffix.size());
    int file_rank = 0;
    try {
        std::size_t used = 0;
        file_rank = std::stoi(rank_text, &used);
        if (used != rank_text.size())
            throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw parse_error("kl cache: bad rank field '" + rank_text + "'");
    }
    if (file_rank != group.rank())
        throw rank_mismatch_error("kl cache: file has rank " + std::to_string(file_rank) +
                                  ", expected " + std::to_string(group.rank()));

    KLTable table(group);
    table.cols_.resize(group.size());
    Word prev_x, prev_y;
    bool have_prev = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        auto fail = [&](const std::string& msg) -> parse_error {
            return parse_error("kl cache line " + std::to_string(line_no) + ": " + msg);
        };
        std::size_t p1 = line.find('|');
        std::size_t p2 = p1 == std::string::npos ? std::string::npos : line.find('|', p1 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos ||
            line.find('|', p2 + 1) != std::string::npos)
            throw fail("expected exactly three |-separated fields");
        Word wx, wy;
        Element x, y;
        Laurent h;
        try {
            wx = SymmetricGroup::parse_word(line.substr(0, p1));
            wy = SymmetricGroup::parse_word(line.substr(p1 + 1, p2 - p1 - 1));
            x = group.from_word(wx);
            y = group.from_word(wy);
            h = Laurent::parse(line.substr(p2 + 1));
        } catch (const user_error& e) {
            throw fail(e.what());
        }
        if (wx != group.canonical_word(x) || wy != group.canonical_word(y))
            throw fail("word is not the canonical reduced word of its element");
        if (have_prev && !(std::tie(prev_x, prev_y) < std::tie(wx, wy)))
            throw fail("entries out of (word_x, word_y) lexicographic order");
        prev_x = wx;
        prev_y = wy;
        have_prev = true;
        if (h.is_zero())
            throw fail("zero entry stored explicitly");
        table.cols_[y.id].emplace_back(x.id, std::move(h));
    }
    if (in.bad())
        throw parse_error("kl cache: read failure");
    for (auto& col : table.cols_)
        std::sort(col.begin(), col.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
    table.validate_invariants();
    table.build_rows();
    return table;
}

void KLTable::validate_invariants() const {
    const SymmetricGroup& g = *group_;
    const Laurent one(1);
    for (ElementId yid = 0; yid < g.size(); ++yid) {
        Element y{static_cast<std::uint8_t>(g.rank()), yid};
        bool saw_diag = false;
        for (const auto& [xid, h] : cols_[yid]) {
            Element x{static_cast<std::uint8_t>(g.rank()), xid};
            if (xid == yid) {
                if (!(h == one))
                    throw invariant_error("kl table: diagonal entry at '" +
                                          SymmetricGroup::word_str(g.canonical_word(y)) +
                                          "' is not 1");
                saw_diag = true;
                continue;
            }
            if (!g.bruhat_leq(x, y))
                throw invariant_error("kl table: entry at a pair not below in Bruhat order");
            if (h.min_degree() < 1)
                throw invariant_error("kl table: off-diagonal entry with min degree < 1");
        }
        if (!saw_diag)
            throw invariant_error("kl table: missing diagonal entry for '" +
                                  SymmetricGroup::word_str(g.canonical_word(y)) + "'");
    }
}

std::string cache_file_name(int rank) {
    return "typeA_rank" + std::to_string(rank) + ".klcache";
}

KLTable cached_kl_table(const SymmetricGroup& group, const std::filesystem::path& dir,
                        const KLTable::ComputeOptions& opts, bool* from_cache) {
    if (from_cache)
        *from_cache = false;
    if (dir.empty())
        return KLTable::compute(group, opts);
    std::filesystem::path file = dir / cache_file_name(group.rank());
    if (std::filesystem::exists(file)) {
        KLTable table = KLTable::load(file, group);
        if (from_cache)
            *from_cache = true;
        return table;
    }
    KLTable table = KLTable::compute(group, opts);
    std::filesystem::create_directories(dir);
    table.save(file);
    return table;
}

} // namespace cellkit
