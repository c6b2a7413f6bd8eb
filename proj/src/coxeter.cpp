#include "cellkit/coxeter.hpp"

#include "cellkit/errors.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>

namespace cellkit {

SymmetricGroup::SymmetricGroup(int rank) : n_(rank) {
    if (rank < 1 || rank > kMaxRank)
        throw user_error("rank " + std::to_string(rank) + " outside supported range 1.." +
                         std::to_string(kMaxRank));
    fact_[0] = 1;
    for (int i = 1; i <= kMaxRank; ++i)
        fact_[i] = fact_[i - 1] * static_cast<std::uint32_t>(i);

    const std::size_t count = fact_[n_];
    elems_.reserve(count);
    std::vector<int> cur(static_cast<std::size_t>(n_));
    std::iota(cur.begin(), cur.end(), 1);
    do {
        ElementData d;
        for (int i = 0; i < n_; ++i)
            d.perm[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(cur[static_cast<std::size_t>(i)]);
        int len = 0;
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (cur[static_cast<std::size_t>(i)] > cur[static_cast<std::size_t>(j)])
                    ++len;
        d.length = static_cast<std::uint8_t>(len);
        for (int i = 1; i < n_; ++i)
            if (cur[static_cast<std::size_t>(i - 1)] > cur[static_cast<std::size_t>(i)])
                d.right_desc |= static_cast<std::uint8_t>(1u << (i - 1));
        std::array<int, kMaxRank + 1> pos{};
        for (int i = 0; i < n_; ++i)
            pos[static_cast<std::size_t>(cur[static_cast<std::size_t>(i)])] = i;
        for (int i = 1; i < n_; ++i)
            if (pos[static_cast<std::size_t>(i)] > pos[static_cast<std::size_t>(i + 1)])
                d.left_desc |= static_cast<std::uint8_t>(1u << (i - 1));
        elems_.push_back(std::move(d));
    } while (std::next_permutation(cur.begin(), cur.end()));

    for (std::size_t id = 0; id < count; ++id) {
        std::array<std::uint8_t, kMaxRank> inv{};
        for (int i = 0; i < n_; ++i)
            inv[static_cast<std::size_t>(elems_[id].perm[static_cast<std::size_t>(i)] - 1)] =
                static_cast<std::uint8_t>(i + 1);
        elems_[id].inverse = lehmer_rank(inv.data());
    }

    right_step_.resize(count);
    left_step_.resize(count);
    for (std::size_t id = 0; id < count; ++id) {
        for (int i = 1; i < n_; ++i) {
            auto q = elems_[id].perm;
            std::swap(q[static_cast<std::size_t>(i - 1)], q[static_cast<std::size_t>(i)]);
            right_step_[id][static_cast<std::size_t>(i - 1)] = lehmer_rank(q.data());
            auto r = elems_[id].perm;
            for (int k = 0; k < n_; ++k) {
                if (r[static_cast<std::size_t>(k)] == i)
                    r[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(i + 1);
                else if (r[static_cast<std::size_t>(k)] == i + 1)
                    r[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(i);
            }
            left_step_[id][static_cast<std::size_t>(i - 1)] = lehmer_rank(r.data());
        }
    }

    // Canonical (lexicographically least) reduced word: peel off the
    // smallest left descent until reaching the identity.
    for (std::size_t id = 0; id < count; ++id) {
        Word w;
        ElementId x = static_cast<ElementId>(id);
        while (elems_[x].left_desc != 0) {
            int i = std::countr_zero(elems_[x].left_desc) + 1;
            w.push_back(i);
            x = left_step_[x][static_cast<std::size_t>(i - 1)];
        }
        elems_[id].canonical = std::move(w);
    }

    by_length_.reserve(count);
    for (std::size_t id = 0; id < count; ++id)
        by_length_.push_back({static_cast<std::uint8_t>(n_), static_cast<ElementId>(id)});
    std::sort(by_length_.begin(), by_length_.end(), [this](Element a, Element b) {
        const ElementData& da = elems_[a.id];
        const ElementData& db = elems_[b.id];
        if (da.length != db.length)
            return da.length < db.length;
        return da.canonical < db.canonical;
    });
    order_index_.resize(count);
    for (std::size_t k = 0; k < count; ++k)
        order_index_[by_length_[k].id] = static_cast<std::uint32_t>(k);
}

ElementId SymmetricGroup::lehmer_rank(const std::uint8_t* perm) const {
    ElementId r = 0;
    for (int i = 0; i < n_; ++i) {
        std::uint32_t smaller_after = 0;
        for (int j = i + 1; j < n_; ++j)
            if (perm[j] < perm[i])
                ++smaller_after;
        r += smaller_after * fact_[n_ - 1 - i];
    }
    return r;
}

void SymmetricGroup::check_element(Element x) const {
    if (x.rank != n_ || x.id >= elems_.size())
        throw user_error("element does not belong to S_" + std::to_string(n_));
}

void SymmetricGroup::check_generator(int i) const {
    if (i < 1 || i >= n_)
        throw user_error("generator index " + std::to_string(i) + " out of range for rank " +
                         std::to_string(n_));
}

Element SymmetricGroup::simple(int i) const {
    check_generator(i);
    return {static_cast<std::uint8_t>(n_), right_step_[0][static_cast<std::size_t>(i - 1)]};
}

Element SymmetricGroup::element(ElementId id) const {
    if (id >= elems_.size())
        throw user_error("element id out of range");
    return {static_cast<std::uint8_t>(n_), id};
}

Element SymmetricGroup::from_one_line(const std::vector<int>& perm) const {
    if (perm.size() != static_cast<std::size_t>(n_))
        throw user_error("one-line notation must have length " + std::to_string(n_));
    std::array<bool, kMaxRank + 1> seen{};
    std::array<std::uint8_t, kMaxRank> p{};
    for (int i = 0; i < n_; ++i) {
        int val = perm[static_cast<std::size_t>(i)];
        if (val < 1 || val > n_ || seen[static_cast<std::size_t>(val)])
            throw user_error("not a permutation of 1.." + std::to_string(n_));
        seen[static_cast<std::size_t>(val)] = true;
        p[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(val);
    }
    return {static_cast<std::uint8_t>(n_), lehmer_rank(p.data())};
}

std::vector<int> SymmetricGroup::one_line(Element x) const {
    check_element(x);
    std::vector<int> out(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
        out[static_cast<std::size_t>(i)] = elems_[x.id].perm[static_cast<std::size_t>(i)];
    return out;
}

int SymmetricGroup::length(Element x) const {
    check_element(x);
    return elems_[x.id].length;
}

Element SymmetricGroup::inverse(Element x) const {
    check_element(x);
    return {static_cast<std::uint8_t>(n_), elems_[x.id].inverse};
}

Element SymmetricGroup::multiply(Element x, Element y) const {
    check_element(x);
    check_element(y);
    const auto& px = elems_[x.id].perm;
    const auto& py = elems_[y.id].perm;
    std::array<std::uint8_t, kMaxRank> r{};
    for (int i = 0; i < n_; ++i)
        r[static_cast<std::size_t>(i)] = px[static_cast<std::size_t>(py[static_cast<std::size_t>(i)] - 1)];
    return {static_cast<std::uint8_t>(n_), lehmer_rank(r.data())};
}

Element SymmetricGroup::multiply_simple_right(Element x, int i) const {
    check_element(x);
    check_generator(i);
    return {static_cast<std::uint8_t>(n_), right_step_[x.id][static_cast<std::size_t>(i - 1)]};
}

Element SymmetricGroup::multiply_simple_left(int i, Element x) const {
    check_element(x);
    check_generator(i);
    return {static_cast<std::uint8_t>(n_), left_step_[x.id][static_cast<std::size_t>(i - 1)]};
}

bool SymmetricGroup::has_left_descent(Element x, int i) const {
    check_element(x);
    check_generator(i);
    return (elems_[x.id].left_desc >> (i - 1)) & 1u;
}

bool SymmetricGroup::has_right_descent(Element x, int i) const {
    check_element(x);
    check_generator(i);
    return (elems_[x.id].right_desc >> (i - 1)) & 1u;
}

int SymmetricGroup::first_left_descent(Element x) const {
    check_element(x);
    std::uint8_t mask = elems_[x.id].left_desc;
    return mask == 0 ? 0 : std::countr_zero(mask) + 1;
}

int SymmetricGroup::first_right_descent(Element x) const {
    check_element(x);
    std::uint8_t mask = elems_[x.id].right_desc;
    return mask == 0 ? 0 : std::countr_zero(mask) + 1;
}

const Word& SymmetricGroup::canonical_word(Element x) const {
    check_element(x);
    return elems_[x.id].canonical;
}

Element SymmetricGroup::from_word(const Word& w) const {
    ElementId x = 0;
    for (int letter : w) {
        check_generator(letter);
        x = right_step_[x][static_cast<std::size_t>(letter - 1)];
    }
    return {static_cast<std::uint8_t>(n_), x};
}

bool SymmetricGroup::bruhat_leq(Element x, Element y) const {
    check_element(x);
    check_element(y);
    if (x.id == y.id)
        return true;
    const ElementData& dx = elems_[x.id];
    const ElementData& dy = elems_[y.id];
    if (dx.length >= dy.length)
        return false;
    // Rank-matrix dominance: x <= y iff for all i,j
    //   #{a <= i : x(a) >= j} <= #{a <= i : y(a) >= j}.
    std::array<int, kMaxRank + 1> cx{}, cy{};
    for (int i = 0; i < n_; ++i) {
        for (int j = 1; j <= dx.perm[static_cast<std::size_t>(i)]; ++j)
            ++cx[static_cast<std::size_t>(j)];
        for (int j = 1; j <= dy.perm[static_cast<std::size_t>(i)]; ++j)
            ++cy[static_cast<std::size_t>(j)];
        for (int j = 2; j <= n_; ++j)
            if (cx[static_cast<std::size_t>(j)] > cy[static_cast<std::size_t>(j)])
                return false;
    }
    return true;
}

bool SymmetricGroup::is_involution(Element x) const {
    check_element(x);
    return elems_[x.id].inverse == x.id;
}

std::vector<Element> SymmetricGroup::involutions() const {
    std::vector<Element> out;
    for (Element x : by_length_)
        if (elems_[x.id].inverse == x.id)
            out.push_back(x);
    return out;
}

Element SymmetricGroup::diagram_conjugate(Element x) const {
    return multiply(multiply(longest(), x), longest());
}

std::vector<int> SymmetricGroup::rsk_shape(Element x) const {
    check_element(x);
    std::vector<std::vector<int>> rows;
    for (int i = 0; i < n_; ++i) {
        int val = elems_[x.id].perm[static_cast<std::size_t>(i)];
        for (std::size_t r = 0;; ++r) {
            if (r == rows.size()) {
                rows.push_back({val});
                break;
            }
            auto it = std::upper_bound(rows[r].begin(), rows[r].end(), val);
            if (it == rows[r].end()) {
                rows[r].push_back(val);
                break;
            }
            std::swap(*it, val);
        }
    }
    std::vector<int> shape;
    shape.reserve(rows.size());
    for (const auto& row : rows)
        shape.push_back(static_cast<int>(row.size()));
    return shape;
}

std::size_t SymmetricGroup::order_index(Element x) const {
    check_element(x);
    return order_index_[x.id];
}

namespace {

std::vector<int> normalize_generators(const SymmetricGroup& group, const std::vector<int>& gens) {
    std::vector<int> sorted = gens;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw user_error("duplicate generator in parabolic subset");
    for (int i : sorted)
        if (i < 1 || i >= group.rank())
            throw user_error("generator index " + std::to_string(i) + " out of range for rank " +
                             std::to_string(group.rank()));
    return sorted;
}

} // namespace

std::vector<int> SymmetricGroup::generator_blocks(const std::vector<int>& gens) const {
    // gens must already be sorted and validated. Positions 1..n are
    // grouped into maximal runs joined by the chosen adjacent swaps.
    std::vector<int> block(static_cast<std::size_t>(n_));
    int b = 0;
    for (int p = 2; p <= n_; ++p) {
        if (!std::binary_search(gens.begin(), gens.end(), p - 1))
            ++b;
        block[static_cast<std::size_t>(p - 1)] = b;
    }
    return block;
}

SymmetricGroup::Parabolic SymmetricGroup::parabolic(const std::vector<int>& gens) const {
    Parabolic out;
    out.generators = normalize_generators(*this, gens);
    std::vector<char> seen(elems_.size(), 0);
    std::vector<ElementId> stack{0};
    seen[0] = 1;
    std::vector<ElementId> found{0};
    while (!stack.empty()) {
        ElementId id = stack.back();
        stack.pop_back();
        for (int i : out.generators) {
            ElementId next = right_step_[id][static_cast<std::size_t>(i - 1)];
            if (!seen[next]) {
                seen[next] = 1;
                stack.push_back(next);
                found.push_back(next);
            }
        }
    }
    out.members.reserve(found.size());
    for (ElementId id : found)
        out.members.push_back({static_cast<std::uint8_t>(n_), id});
    std::sort(out.members.begin(), out.members.end(), [this](Element a, Element b) {
        return order_index_[a.id] < order_index_[b.id];
    });
    // Longest element of W_I by greedy ascent inside the subgroup.
    ElementId top = 0;
    for (;;) {
        bool moved = false;
        for (int i : out.generators) {
            if (!((elems_[top].right_desc >> (i - 1)) & 1u)) {
                top = right_step_[top][static_cast<std::size_t>(i - 1)];
                moved = true;
                break;
            }
        }
        if (!moved)
            break;
    }
    out.longest = {static_cast<std::uint8_t>(n_), top};
    return out;
}

bool SymmetricGroup::in_parabolic(Element x, const std::vector<int>& gens) const {
    check_element(x);
    std::vector<int> sorted = normalize_generators(*this, gens);
    std::vector<int> block = generator_blocks(sorted);
    const auto& perm = elems_[x.id].perm;
    for (int p = 1; p <= n_; ++p)
        if (block[static_cast<std::size_t>(perm[static_cast<std::size_t>(p - 1)] - 1)] !=
            block[static_cast<std::size_t>(p - 1)])
            return false;
    return true;
}

Element SymmetricGroup::parabolic_lift(Element x, const std::vector<int>& gens) const {
    if (!in_parabolic(x, gens))
        throw user_error("element lies outside the requested parabolic subgroup");
    Parabolic par = parabolic(gens);
    Element result = multiply(multiply(x, par.longest), longest());
    int expect = length(longest()) - length(par.longest) + length(x);
    if (length(result) != expect)
        throw internal_error("parabolic lift violated its length identity");
    return result;
}

Word SymmetricGroup::parse_word(std::string_view text) {
    Word w;
    if (text.empty())
        return w;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = text.find(',', pos);
        std::string_view token =
            text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        if (token.empty())
            throw parse_error("word: empty letter");
        int value = 0;
        const char* last = token.data() + token.size();
        auto res = std::from_chars(token.data(), last, value);
        if (res.ec != std::errc() || res.ptr != last)
            throw parse_error("word: bad letter '" + std::string(token) + "'");
        if (value < 1)
            throw parse_error("word: letters must be positive");
        w.push_back(value);
        if (comma == std::string_view::npos)
            break;
        pos = comma + 1;
    }
    return w;
}

std::string SymmetricGroup::word_str(const Word& w) {
    std::string out;
    bool first = true;
    for (int letter : w) {
        if (!first)
            out += ',';
        first = false;
        out += std::to_string(letter);
    }
    return out;
}

} // namespace cellkit
