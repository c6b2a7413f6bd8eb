#include "cellkit/cells.hpp"

#include "cellkit/errors.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>

namespace cellkit {

namespace {

Element mk(const SymmetricGroup& g, ElementId id) {
    return Element{static_cast<std::uint8_t>(g.rank()), id};
}

// Right-multiplication successors of x in the KL basis, by the closed
// form of underline-H_x * underline-H_s:
//   xs < x : (v + v^-1) underline-H_x              (self loop, dropped)
//   xs > x : underline-H_{xs} + sum over u < x with mu(u,x) != 0 and
//            us < u of mu(u,x) underline-H_u.
// The generic-product path (kl_product) validates this in the tests.
std::vector<ElementId> right_successors(const KLTable& table, Element x) {
    const SymmetricGroup& g = table.group();
    std::vector<ElementId> out;
    for (int s = 1; s < g.rank(); ++s) {
        if (g.has_right_descent(x, s))
            continue;
        out.push_back(g.multiply_simple_right(x, s).id);
        for (const auto& [uid, h] : table.column(x)) {
            if (uid == x.id || h.coeff(1) == 0)
                continue;
            if (g.has_right_descent(mk(g, uid), s))
                out.push_back(uid);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Iterative Tarjan over a vector-of-vectors adjacency; returns the
// component index per node (arbitrary numbering, relabelled later).
std::vector<int> strongly_connected_components(const std::vector<std::vector<ElementId>>& adj,
                                               int& comp_count) {
    const std::size_t n = adj.size();
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<ElementId> stack;
    struct Frame {
        ElementId node;
        std::size_t next_edge;
    };
    std::vector<Frame> call;
    int next_index = 0;
    comp_count = 0;
    for (ElementId root = 0; root < n; ++root) {
        if (index[root] != -1)
            continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            Frame& f = call.back();
            ElementId v = f.node;
            if (f.next_edge == 0) {
                index[v] = low[v] = next_index++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.next_edge < adj[v].size()) {
                ElementId w = adj[v][f.next_edge++];
                if (index[w] == -1) {
                    call.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w])
                    low[v] = std::min(low[v], index[w]);
            }
            if (descended)
                continue;
            if (low[v] == index[v]) {
                while (true) {
                    ElementId w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = comp_count;
                    if (w == v)
                        break;
                }
                ++comp_count;
            }
            call.pop_back();
            if (!call.empty()) {
                ElementId parent = call.back().node;
                low[parent] = std::min(low[parent], low[v]);
            }
        }
    }
    return comp;
}

} // namespace

struct CellPartitionBuilder {
    // Finalizes a partition from raw per-element component ids:
    // renumbers cells by first appearance in (length, word) order, fills
    // the member lists, and computes the reachability closure from raw
    // component-level edges (edge a -> b meaning b is reachable).
    static CellPartition finish(const SymmetricGroup& g, Side side,
                                const std::vector<int>& raw_comp,
                                const std::vector<std::vector<int>>& raw_edges, int raw_count) {
        CellPartition p;
        p.side_ = side;
        p.rank_ = g.rank();
        p.cell_of_.assign(g.size(), -1);
        std::vector<int> relabel(static_cast<std::size_t>(raw_count), -1);
        int next = 0;
        for (Element x : g.elements_by_length()) {
            int rc = raw_comp[x.id];
            if (relabel[static_cast<std::size_t>(rc)] == -1)
                relabel[static_cast<std::size_t>(rc)] = next++;
        }
        p.members_.resize(static_cast<std::size_t>(next));
        for (Element x : g.elements_by_length()) {
            int c = relabel[static_cast<std::size_t>(raw_comp[x.id])];
            p.cell_of_[x.id] = c;
            p.members_[static_cast<std::size_t>(c)].push_back(x);
        }
        // Closure over the condensation by DFS from every cell.
        std::vector<std::vector<int>> edges(static_cast<std::size_t>(next));
        for (int rc = 0; rc < raw_count; ++rc) {
            int a = relabel[static_cast<std::size_t>(rc)];
            for (int rd : raw_edges[static_cast<std::size_t>(rc)]) {
                int b = relabel[static_cast<std::size_t>(rd)];
                if (a != b)
                    edges[static_cast<std::size_t>(a)].push_back(b);
            }
        }
        p.reach_.assign(static_cast<std::size_t>(next),
                        std::vector<char>(static_cast<std::size_t>(next), 0));
        for (int start = 0; start < next; ++start) {
            std::vector<int> stack{start};
            auto& row = p.reach_[static_cast<std::size_t>(start)];
            row[static_cast<std::size_t>(start)] = 1;
            while (!stack.empty()) {
                int a = stack.back();
                stack.pop_back();
                for (int b : edges[static_cast<std::size_t>(a)])
                    if (!row[static_cast<std::size_t>(b)]) {
                        row[static_cast<std::size_t>(b)] = 1;
                        stack.push_back(b);
                    }
            }
        }
        return p;
    }
};

CellPartition CellPartition::right_cells(const KLTable& table) {
    const SymmetricGroup& g = table.group();
    std::vector<std::vector<ElementId>> adj(g.size());
    for (ElementId id = 0; id < g.size(); ++id)
        adj[id] = right_successors(table, mk(g, id));
    int comp_count = 0;
    std::vector<int> comp = strongly_connected_components(adj, comp_count);
    std::vector<std::vector<int>> comp_edges(static_cast<std::size_t>(comp_count));
    for (ElementId id = 0; id < g.size(); ++id)
        for (ElementId t : adj[id])
            if (comp[id] != comp[t])
                comp_edges[static_cast<std::size_t>(comp[id])].push_back(comp[t]);
    return CellPartitionBuilder::finish(g, Side::right, comp, comp_edges, comp_count);
}

CellPartition CellPartition::from_right(const KLTable& table, const CellPartition& right,
                                        Side side) {
    const SymmetricGroup& g = table.group();
    if (side == Side::right)
        return right;
    // x ~_L y iff x^-1 ~_R y^-1; transport everything through inversion.
    std::vector<int> comp(g.size());
    for (ElementId id = 0; id < g.size(); ++id)
        comp[id] = right.cell_of_[g.inverse(mk(g, id)).id];
    std::vector<std::vector<int>> edges(static_cast<std::size_t>(right.count()));
    for (int a = 0; a < right.count(); ++a)
        for (int b = 0; b < right.count(); ++b)
            if (a != b && right.reach_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])
                edges[static_cast<std::size_t>(a)].push_back(b);
    return CellPartitionBuilder::finish(g, Side::left, comp, edges, right.count());
}

CellPartition CellPartition::left_cells(const KLTable& table) {
    return from_right(table, right_cells(table), Side::left);
}

std::pair<CellPartition, CellPartition> CellPartition::left_and_right(const KLTable& table) {
    CellPartition right = right_cells(table);
    CellPartition left = from_right(table, right, Side::left);
    return {std::move(left), std::move(right)};
}

int CellPartition::cell_of(Element x) const {
    if (x.rank != rank_ || x.id >= cell_of_.size())
        throw user_error("cell partition: element from a different rank");
    return cell_of_[x.id];
}

const std::vector<Element>& CellPartition::members(int cell) const {
    if (cell < 0 || cell >= count())
        throw user_error("cell partition: cell id out of range");
    return members_[static_cast<std::size_t>(cell)];
}

bool CellPartition::cell_leq(int a, int b) const {
    if (a < 0 || a >= count() || b < 0 || b >= count())
        throw user_error("cell partition: cell id out of range");
    return reach_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0;
}

bool CellPartition::leq(Element x, Element y) const {
    return cell_leq(cell_of(x), cell_of(y));
}

// ---------------------------------------------------------------------------
// a-function

namespace {

// KL coordinates of f * underline-H_s for f given in KL coordinates,
// via the closed multiplication form (see right_successors).
using KLCoords = std::vector<std::pair<ElementId, Laurent>>;

KLCoords kl_coords_times_gen(const KLTable& table, const KLCoords& f, int s) {
    const SymmetricGroup& g = table.group();
    static thread_local std::vector<Laurent> val;
    static thread_local std::vector<ElementId> touched;
    val.resize(g.size());
    const Laurent gap = Laurent::v(1) + Laurent::v(-1);
    auto add = [&](ElementId id, const Laurent& c) {
        if (val[id].is_zero() && !c.is_zero())
            touched.push_back(id);
        val[id] += c;
    };
    for (const auto& [xid, c] : f) {
        Element x = mk(g, xid);
        if (g.has_right_descent(x, s)) {
            add(xid, c * gap);
            continue;
        }
        add(g.multiply_simple_right(x, s).id, c);
        for (const auto& [uid, h] : table.column(x)) {
            if (uid == xid)
                continue;
            Int mu = h.coeff(1);
            if (mu == 0 || !g.has_right_descent(mk(g, uid), s))
                continue;
            add(uid, c * Laurent(mu));
        }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    KLCoords out;
    out.reserve(touched.size());
    for (ElementId id : touched) {
        if (!val[id].is_zero())
            out.emplace_back(id, std::move(val[id]));
        val[id] = Laurent();
    }
    touched.clear();
    return out;
}

// For one fixed y: expand underline-H_y * underline-H_z for every z and
// fold max degree per landing element into `acc`.
void a_exact_row(const KLTable& table, Element y, std::vector<int>& acc) {
    const SymmetricGroup& g = table.group();
    std::vector<KLCoords> f(g.size());
    for (Element z : g.elements_by_length()) {
        if (z.id == g.identity().id) {
            f[z.id] = {{y.id, Laurent(1)}};
        } else {
            const int s = g.first_right_descent(z);
            Element shorter = g.multiply_simple_right(z, s);
            KLCoords prod = kl_coords_times_gen(table, f[shorter.id], s);
            // underline-H_{z'} underline-H_s = underline-H_z + correction;
            // subtract mu(u, z') * (underline-H_y underline-H_u).
            for (const auto& [uid, h] : table.column(shorter)) {
                if (uid == shorter.id)
                    continue;
                Int mu = h.coeff(1);
                if (mu == 0 || !g.has_right_descent(mk(g, uid), s))
                    continue;
                Laurent neg(-mu);
                KLCoords merged;
                merged.reserve(prod.size() + f[uid].size());
                auto a = prod.begin();
                auto b = f[uid].begin();
                while (a != prod.end() && b != f[uid].end()) {
                    if (a->first < b->first) {
                        merged.push_back(std::move(*a++));
                    } else if (b->first < a->first) {
                        merged.emplace_back(b->first, b->second * neg);
                        ++b;
                    } else {
                        Laurent c = std::move(a->second);
                        c.add_scaled(b->second, neg);
                        if (!c.is_zero())
                            merged.emplace_back(a->first, std::move(c));
                        ++a;
                        ++b;
                    }
                }
                for (; a != prod.end(); ++a)
                    merged.push_back(std::move(*a));
                for (; b != f[uid].end(); ++b)
                    merged.emplace_back(b->first, b->second * neg);
                prod = std::move(merged);
            }
            f[z.id] = std::move(prod);
        }
        for (const auto& [xid, k] : f[z.id]) {
            int d = k.max_degree();
            if (d > acc[xid])
                acc[xid] = d;
        }
    }
}

int binom2(int m) {
    return m * (m - 1) / 2;
}

int shape_a_value(const std::vector<int>& shape) {
    // sum over the conjugate partition of binom(part, 2)
    int total = 0;
    for (int i = 1; shape.front() >= i; ++i) {
        int conj = 0;
        for (int part : shape)
            if (part >= i)
                ++conj;
        total += binom2(conj);
    }
    return total;
}

std::once_flag fast_mode_validated;

void validate_fast_mode() {
    // Compare the shape formula against the definition on ranks 2..4.
    for (int n = 2; n <= 4; ++n) {
        SymmetricGroup g(n);
        KLTable table = KLTable::compute(g);
        AFunction ex = AFunction::exact(table);
        for (ElementId id = 0; id < g.size(); ++id) {
            Element x = mk(g, id);
            if (ex.value(x) != shape_a_value(g.rsk_shape(x)))
                throw internal_error("fast a-function failed its self-validation at rank " +
                                     std::to_string(n));
        }
    }
}

} // namespace

AFunction AFunction::exact(const KLTable& table, int threads) {
    const SymmetricGroup& g = table.group();
    AFunction out;
    out.mode_ = Mode::exact;
    out.rank_ = g.rank();
    out.values_.assign(g.size(), 0);
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1)
        threads = 1;
    threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), g.size()));
    if (threads == 1) {
        for (ElementId y = 0; y < g.size(); ++y)
            a_exact_row(table, mk(g, y), out.values_);
    } else {
        std::vector<std::vector<int>> acc(static_cast<std::size_t>(threads),
                                          std::vector<int>(g.size(), 0));
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t]() {
                try {
                    for (ElementId y = static_cast<ElementId>(t); y < g.size();
                         y += static_cast<ElementId>(threads))
                        a_exact_row(table, mk(g, y), acc[static_cast<std::size_t>(t)]);
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
        for (const auto& local : acc)
            for (std::size_t i = 0; i < local.size(); ++i)
                out.values_[i] = std::max(out.values_[i], local[i]);
    }
    return out;
}

AFunction AFunction::fast(const SymmetricGroup& group) {
    if (group.rank() >= 5)
        std::call_once(fast_mode_validated, validate_fast_mode);
    AFunction out;
    out.mode_ = Mode::fast;
    out.rank_ = group.rank();
    out.values_.resize(group.size());
    for (ElementId id = 0; id < group.size(); ++id)
        out.values_[id] = shape_a_value(group.rsk_shape(mk(group, id)));
    return out;
}

int AFunction::value(Element x) const {
    if (x.rank != rank_ || x.id >= values_.size())
        throw user_error("a-function: element from a different rank");
    return values_[x.id];
}

std::vector<Element> duflo_elements(const KLTable& table, const CellPartition& right_cells,
                                    const AFunction& afn) {
    const SymmetricGroup& g = table.group();
    if (right_cells.side() != Side::right)
        throw user_error("duflo_elements: needs the right cell partition");
    if (right_cells.rank() != g.rank() || afn.rank() != g.rank())
        throw user_error("duflo_elements: rank mismatch");
    std::vector<Element> out;
    for (int c = 0; c < right_cells.count(); ++c) {
        int found = 0;
        Element pick{};
        for (Element d : right_cells.members(c)) {
            const Laurent& h = table.entry(g.identity(), d);
            if (h.is_zero())
                throw internal_error("duflo_elements: missing h_{e,x} entry");
            if (h.min_degree() == afn.value(d)) {
                ++found;
                pick = d;
            }
        }
        if (found != 1)
            throw internal_error("duflo_elements: right cell " + std::to_string(c) + " has " +
                                 std::to_string(found) + " candidates (expected exactly 1)");
        out.push_back(pick);
    }
    std::sort(out.begin(), out.end(),
              [&](Element a, Element b) { return g.order_index(a) < g.order_index(b); });
    return out;
}

} // namespace cellkit
