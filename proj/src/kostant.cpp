#include "cellkit/kostant.hpp"

#include "cellkit/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace cellkit {

const char* status_name(KostantStatus s) {
    switch (s) {
    case KostantStatus::unknown: return "unknown";
    case KostantStatus::positive: return "positive";
    case KostantStatus::negative: return "negative";
    }
    return "?";
}

std::vector<KostantSeed> builtin_seeds(int rank) {
    if (rank < 2 || rank > SymmetricGroup::kMaxRank)
        throw user_error("builtin_seeds: rank " + std::to_string(rank) + " outside 2.." +
                         std::to_string(SymmetricGroup::kMaxRank));
    SymmetricGroup g(rank);
    std::vector<KostantSeed> out;
    out.push_back({rank, Word{}, KostantStatus::positive,
                   "classical: L(e) is a quotient of the dominant Verma module"});
    out.push_back({rank, g.canonical_word(g.longest()), KostantStatus::positive,
                   "classical: L(w0) is the simple antidominant Verma module"});
    return out;
}

std::vector<KostantSeed> load_seeds(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw user_error("cannot open seed file '" + path.string() + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error("seed file '" + path.string() + "': " + e.what());
    }
    if (!doc.is_array())
        throw parse_error("seed file: top level must be a JSON array");
    std::vector<KostantSeed> out;
    std::map<int, std::unique_ptr<SymmetricGroup>> groups;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& item = doc[i];
        auto fail = [&](const std::string& msg) -> parse_error {
            return parse_error("seed entry " + std::to_string(i) + ": " + msg);
        };
        if (!item.is_object())
            throw fail("not an object");
        for (const char* key : {"rank", "word", "status", "source"})
            if (!item.contains(key))
                throw fail(std::string("missing field '") + key + "'");
        if (!item["rank"].is_number_integer())
            throw fail("'rank' must be an integer");
        const int rank = item["rank"].get<int>();
        if (rank < 2 || rank > SymmetricGroup::kMaxRank)
            throw user_error("seed entry " + std::to_string(i) + ": rank " + std::to_string(rank) +
                             " outside 2.." + std::to_string(SymmetricGroup::kMaxRank));
        if (!item["word"].is_string() || !item["status"].is_string() || !item["source"].is_string())
            throw fail("'word', 'status' and 'source' must be strings");
        Word word = SymmetricGroup::parse_word(item["word"].get<std::string>());
        auto& g = groups[rank];
        if (!g)
            g = std::make_unique<SymmetricGroup>(rank);
        g->from_word(word); // validates the letters against the rank
        const std::string status_text = item["status"].get<std::string>();
        KostantStatus status;
        if (status_text == "positive")
            status = KostantStatus::positive;
        else if (status_text == "negative")
            status = KostantStatus::negative;
        else
            throw fail("status must be 'positive' or 'negative', got '" + status_text + "'");
        out.push_back({rank, std::move(word), status, item["source"].get<std::string>()});
    }
    return out;
}

// ---------------------------------------------------------------------------
// KostantAtlas accessors

const SymmetricGroup& KostantAtlas::group(int rank) const {
    if (rank < 2 || rank > max_rank_)
        throw user_error("atlas: rank " + std::to_string(rank) + " not in 2.." +
                         std::to_string(max_rank_));
    return *groups_[static_cast<std::size_t>(rank - 2)];
}

const CellPartition& KostantAtlas::left_cells(int rank) const {
    if (rank < 2 || rank > max_rank_)
        throw user_error("atlas: rank " + std::to_string(rank) + " not in 2.." +
                         std::to_string(max_rank_));
    return left_[static_cast<std::size_t>(rank - 2)];
}

std::size_t KostantAtlas::node_index(int rank, int cell) const {
    const CellPartition& cells = left_cells(rank);
    if (cell < 0 || cell >= cells.count())
        throw user_error("atlas: cell id out of range");
    return offset_[static_cast<std::size_t>(rank - 2)] + static_cast<std::size_t>(cell);
}

KostantStatus KostantAtlas::status(int rank, Element x) const {
    return node(rank, left_cells(rank).cell_of(x)).status;
}

std::string KostantAtlas::provenance_summary(std::size_t node) const {
    std::string out;
    std::size_t cur = node;
    for (;;) {
        const Node& nd = nodes_[cur];
        if (nd.derivation < 0)
            break;
        const KostantDerivation& d = derivations_[static_cast<std::size_t>(nd.derivation)];
        if (!out.empty())
            out += " <- ";
        out += d.rule + "[" + d.detail + "]";
        if (d.premises.empty())
            break;
        if (d.premises.size() > 1)
            out += " (+" + std::to_string(d.premises.size() - 1) + " more premises)";
        cur = d.premises.front();
    }
    return out;
}

std::string KostantAtlas::derivation_tree(std::size_t node) const {
    std::string out;
    // Depth-first rendering; premises always point at earlier-assigned
    // nodes, so this terminates.
    struct Item {
        std::size_t node;
        int depth;
    };
    std::vector<Item> stack{{node, 0}};
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const Node& nd = nodes_[it.node];
        const SymmetricGroup& g = *groups_[static_cast<std::size_t>(nd.rank - 2)];
        out.append(static_cast<std::size_t>(it.depth) * 2, ' ');
        out += "rank " + std::to_string(nd.rank) + " cell '" +
               SymmetricGroup::word_str(g.canonical_word(nd.involution)) +
               "': " + status_name(nd.status);
        if (nd.derivation >= 0) {
            const KostantDerivation& d = derivations_[static_cast<std::size_t>(nd.derivation)];
            out += " via " + d.rule + " [" + d.detail + "]";
            for (auto p = d.premises.rbegin(); p != d.premises.rend(); ++p)
                stack.push_back({*p, it.depth + 1});
        }
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Propagation

namespace {

struct Link {
    std::size_t a = 0, b = 0;
    std::string rule;
    std::string detail_to_b; // used when b is derived from a
    std::string detail_to_a;
};

struct Hyper {
    std::size_t lift = 0;
    std::vector<std::size_t> factors;
    std::string detail;
};

std::string interval_str(int a, int b) {
    if (a == b)
        return std::to_string(a);
    return std::to_string(a) + ".." + std::to_string(b);
}

} // namespace

KostantAtlas propagate_kostant(const std::vector<KostantSeed>& seeds,
                               const PropagationOptions& opts) {
    if (opts.max_rank < 2 || opts.max_rank > SymmetricGroup::kMaxRank)
        throw user_error("propagate: max rank must lie in 2.." +
                         std::to_string(SymmetricGroup::kMaxRank));

    KostantAtlas atlas;
    atlas.max_rank_ = opts.max_rank;
    for (int rank = 2; rank <= opts.max_rank; ++rank) {
        atlas.groups_.push_back(std::make_unique<SymmetricGroup>(rank));
        const SymmetricGroup& g = *atlas.groups_.back();
        KLTable table = opts.table_provider ? opts.table_provider(g)
                                            : KLTable::compute(g, {opts.threads});
        atlas.left_.push_back(CellPartition::left_cells(table));
    }
    std::size_t total = 0;
    for (int rank = 2; rank <= opts.max_rank; ++rank) {
        atlas.offset_.push_back(total);
        const CellPartition& cells = atlas.left_cells(rank);
        const SymmetricGroup& g = atlas.group(rank);
        for (int c = 0; c < cells.count(); ++c) {
            Element involution{};
            int count = 0;
            for (Element x : cells.members(c))
                if (g.is_involution(x)) {
                    involution = x;
                    ++count;
                }
            if (count != 1)
                throw internal_error("left cell at rank " + std::to_string(rank) + " contains " +
                                     std::to_string(count) + " involutions (expected exactly 1)");
            KostantAtlas::Node node;
            node.rank = rank;
            node.cell = c;
            node.involution = involution;
            atlas.nodes_.push_back(node);
        }
        total += static_cast<std::size_t>(cells.count());
    }

    auto inv_word = [&](std::size_t node) {
        const KostantAtlas::Node& nd = atlas.nodes_[node];
        const SymmetricGroup& g = atlas.group(nd.rank);
        return SymmetricGroup::word_str(g.canonical_word(nd.involution));
    };
    auto node_tag = [&](std::size_t node) {
        const KostantAtlas::Node& nd = atlas.nodes_[node];
        return "rank-" + std::to_string(nd.rank) + " cell '" + inv_word(node) + "'";
    };

    // --- rule instances -----------------------------------------------------
    std::vector<Link> links;
    std::set<std::tuple<std::size_t, std::size_t, std::string>> link_seen;
    auto add_link = [&](std::size_t a, std::size_t b, std::string rule, std::string to_b,
                        std::string to_a) {
        if (a == b)
            return;
        auto key = std::make_tuple(std::min(a, b), std::max(a, b), rule);
        if (!link_seen.insert(key).second)
            return;
        links.push_back({a, b, std::move(rule), std::move(to_b), std::move(to_a)});
    };
    std::vector<Hyper> hypers;
    std::set<std::pair<std::size_t, std::vector<std::size_t>>> hyper_seen;

    for (int n = 2; n <= opts.max_rank; ++n) {
        const SymmetricGroup& g = atlas.group(n);
        const CellPartition& cells = atlas.left_cells(n);

        // RULE-SYM: conjugation by w0 permutes left cells.
        for (int c = 0; c < cells.count(); ++c) {
            std::size_t a = atlas.node_index(n, c);
            Element d = atlas.nodes_[a].involution;
            std::size_t b = atlas.node_index(n, cells.cell_of(g.diagram_conjugate(d)));
            if (a != b) {
                std::string detail = "diagram symmetry at rank " + std::to_string(n) + ": '" +
                                     inv_word(a) + "' <-> '" + inv_word(b) + "'";
                add_link(a, b, "symmetry", detail, detail);
            }
        }

        // RULE-IND: intervals I = {lo..hi} with W_I a proper S_m, m >= 2.
        for (int lo = 1; lo < n; ++lo) {
            for (int hi = lo; hi < n; ++hi) {
                const int m = hi - lo + 2; // rank of the standard copy
                if (m >= n)
                    continue;
                std::vector<int> gens;
                for (int i = lo; i <= hi; ++i)
                    gens.push_back(i);
                auto par = g.parabolic(gens);
                const SymmetricGroup& gm = atlas.group(m);
                const CellPartition& cells_m = atlas.left_cells(m);
                for (Element x : par.members) {
                    Element lift = g.parabolic_lift(x, gens);
                    std::size_t big = atlas.node_index(n, cells.cell_of(lift));
                    Word shifted = g.canonical_word(x);
                    for (int& letter : shifted)
                        letter -= lo - 1;
                    Element xm = gm.from_word(shifted);
                    std::size_t small = atlas.node_index(m, cells_m.cell_of(xm));
                    std::string base = "parabolic lift, rank " + std::to_string(n) + ", I={" +
                                       interval_str(lo, hi) + "}, x='" +
                                       SymmetricGroup::word_str(g.canonical_word(x)) + "'";
                    add_link(small, big, "induction", base + ": lifts " + node_tag(small),
                             base + ": restricts " + node_tag(big));
                }
            }
        }

        // Product rule for disconnected subsets, only on request.
        if (opts.allow_product_rule && n >= 4) {
            for (unsigned mask = 1; mask < (1u << (n - 1)); ++mask) {
                // Decompose the subset into maximal runs.
                std::vector<std::pair<int, int>> runs;
                for (int i = 1; i < n; ++i) {
                    if (!(mask & (1u << (i - 1))))
                        continue;
                    if (!runs.empty() && runs.back().second == i - 1)
                        runs.back().second = i;
                    else
                        runs.emplace_back(i, i);
                }
                if (runs.size() < 2)
                    continue;
                std::vector<int> gens;
                for (int i = 1; i < n; ++i)
                    if (mask & (1u << (i - 1)))
                        gens.push_back(i);
                auto par = g.parabolic(gens);
                std::string iset;
                for (const auto& [a, b] : runs) {
                    if (!iset.empty())
                        iset += ",";
                    iset += interval_str(a, b);
                }
                for (Element x : par.members) {
                    Element lift = g.parabolic_lift(x, gens);
                    std::size_t big = atlas.node_index(n, cells.cell_of(lift));
                    std::vector<std::size_t> factors;
                    for (const auto& [a, b] : runs) {
                        Word piece;
                        for (int letter : g.canonical_word(x))
                            if (letter >= a && letter <= b)
                                piece.push_back(letter - (a - 1));
                        const int fm = b - a + 2;
                        Element xf = atlas.group(fm).from_word(piece);
                        factors.push_back(
                            atlas.node_index(fm, atlas.left_cells(fm).cell_of(xf)));
                    }
                    std::vector<std::size_t> sorted = factors;
                    std::sort(sorted.begin(), sorted.end());
                    if (!hyper_seen.insert({big, sorted}).second)
                        continue;
                    hypers.push_back({big, std::move(factors),
                                      "product rule (conjunction over factors; not from the "
                                      "source text) at rank " +
                                          std::to_string(n) + ", I={" + iset + "}, x='" +
                                          SymmetricGroup::word_str(g.canonical_word(x)) + "'"});
                }
            }
        }
    }

    // --- fixpoint -----------------------------------------------------------
    std::vector<std::vector<std::size_t>> links_of(atlas.nodes_.size());
    for (std::size_t i = 0; i < links.size(); ++i) {
        links_of[links[i].a].push_back(i);
        links_of[links[i].b].push_back(i);
    }
    std::vector<std::vector<std::size_t>> hypers_of(atlas.nodes_.size());
    for (std::size_t i = 0; i < hypers.size(); ++i) {
        hypers_of[hypers[i].lift].push_back(i);
        for (std::size_t f : hypers[i].factors)
            hypers_of[f].push_back(i);
    }

    std::deque<std::size_t> agenda;
    auto assign = [&](std::size_t node, KostantStatus status, const std::string& rule,
                      const std::string& detail, std::vector<std::size_t> premises) {
        KostantAtlas::Node& nd = atlas.nodes_[node];
        if (nd.status == status)
            return; // consistent repeat; keep the first derivation
        if (nd.status != KostantStatus::unknown) {
            std::string msg = "kostant propagation conflict at " + node_tag(node) +
                              ":\n--- already derived ---\n" + atlas.derivation_tree(node) +
                              "--- conflicting derivation ---\n" + node_tag(node) + ": " +
                              status_name(status) + " via " + rule + " [" + detail + "]\n";
            for (std::size_t p : premises)
                msg += atlas.derivation_tree(p);
            throw internal_error(msg);
        }
        nd.status = status;
        atlas.derivations_.push_back({rule, detail, std::move(premises)});
        nd.derivation = static_cast<std::ptrdiff_t>(atlas.derivations_.size() - 1);
        agenda.push_back(node);
    };

    for (const KostantSeed& seed : seeds) {
        if (seed.rank < 2 || seed.rank > opts.max_rank)
            throw user_error("seed at rank " + std::to_string(seed.rank) +
                             " outside the propagated range 2.." + std::to_string(opts.max_rank));
        if (seed.status == KostantStatus::unknown)
            throw user_error("seed with status 'unknown' is meaningless");
        const SymmetricGroup& g = atlas.group(seed.rank);
        Element x = g.from_word(seed.word);
        std::size_t node =
            atlas.node_index(seed.rank, atlas.left_cells(seed.rank).cell_of(x));
        assign(node, seed.status, "seed",
               "rank " + std::to_string(seed.rank) + " word '" +
                   SymmetricGroup::word_str(seed.word) + "': " + seed.source,
               {});
    }

    std::mt19937 rng(opts.agenda_seed);
    auto evaluate_hyper = [&](const Hyper& h) {
        int yes = 0, no = 0, open = 0;
        for (std::size_t f : h.factors) {
            switch (atlas.nodes_[f].status) {
            case KostantStatus::positive: ++yes; break;
            case KostantStatus::negative: ++no; break;
            case KostantStatus::unknown: ++open; break;
            }
        }
        if (no > 0) {
            std::vector<std::size_t> premises;
            for (std::size_t f : h.factors)
                if (atlas.nodes_[f].status == KostantStatus::negative)
                    premises.push_back(f);
            assign(h.lift, KostantStatus::negative, "product", h.detail + "; a factor is negative",
                   std::move(premises));
        } else if (open == 0) {
            assign(h.lift, KostantStatus::positive, "product", h.detail + "; all factors positive",
                   {h.factors.begin(), h.factors.end()});
        }
        KostantStatus lift_status = atlas.nodes_[h.lift].status;
        if (lift_status == KostantStatus::positive) {
            for (std::size_t f : h.factors)
                if (atlas.nodes_[f].status == KostantStatus::unknown)
                    assign(f, KostantStatus::positive, "product",
                           h.detail + "; lifted cell positive forces every factor", {h.lift});
        } else if (lift_status == KostantStatus::negative && no == 0 && open == 1) {
            std::vector<std::size_t> premises{h.lift};
            std::size_t target = h.factors.front();
            for (std::size_t f : h.factors) {
                if (atlas.nodes_[f].status == KostantStatus::unknown)
                    target = f;
                else
                    premises.push_back(f);
            }
            assign(target, KostantStatus::negative, "product",
                   h.detail + "; lifted cell negative with all other factors positive",
                   std::move(premises));
        }
    };

    while (!agenda.empty()) {
        std::size_t pick = 0;
        if (opts.agenda_seed != 0) {
            pick = std::uniform_int_distribution<std::size_t>(0, agenda.size() - 1)(rng);
        }
        std::size_t node = agenda[pick];
        agenda.erase(agenda.begin() + static_cast<std::ptrdiff_t>(pick));
        const KostantStatus st = atlas.nodes_[node].status;
        for (std::size_t li : links_of[node]) {
            const Link& l = links[li];
            if (l.a == node)
                assign(l.b, st, l.rule, l.detail_to_b, {node});
            else
                assign(l.a, st, l.rule, l.detail_to_a, {node});
        }
        for (std::size_t hi : hypers_of[node])
            evaluate_hyper(hypers[hi]);
    }

    return atlas;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::vector<std::size_t> rank_nodes_sorted(const KostantAtlas& atlas, int rank) {
    const SymmetricGroup& g = atlas.group(rank);
    std::vector<std::size_t> idx;
    for (int c = 0; c < atlas.left_cells(rank).count(); ++c)
        idx.push_back(atlas.node_index(rank, c));
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return g.order_index(atlas.nodes()[a].involution) <
               g.order_index(atlas.nodes()[b].involution);
    });
    return idx;
}

} // namespace

std::string report_tsv(const KostantAtlas& atlas, int rank) {
    const SymmetricGroup& g = atlas.group(rank);
    std::string out;
    int totals[3] = {0, 0, 0};
    for (std::size_t i : rank_nodes_sorted(atlas, rank)) {
        const KostantAtlas::Node& nd = atlas.nodes()[i];
        ++totals[static_cast<int>(nd.status)];
        std::string prov = atlas.provenance_summary(i);
        out += SymmetricGroup::word_str(g.canonical_word(nd.involution));
        out += '\t';
        out += status_name(nd.status);
        out += '\t';
        out += prov.empty() ? "-" : prov;
        out += '\n';
    }
    out += "positive=" + std::to_string(totals[static_cast<int>(KostantStatus::positive)]) +
           " negative=" + std::to_string(totals[static_cast<int>(KostantStatus::negative)]) +
           " unknown=" + std::to_string(totals[static_cast<int>(KostantStatus::unknown)]) + "\n";
    return out;
}

namespace {

nlohmann::json derivation_json(const KostantAtlas& atlas, std::size_t node) {
    const KostantAtlas::Node& nd = atlas.nodes()[node];
    const SymmetricGroup& g = atlas.group(nd.rank);
    nlohmann::json j;
    j["rank"] = nd.rank;
    j["involution"] = SymmetricGroup::word_str(g.canonical_word(nd.involution));
    j["status"] = status_name(nd.status);
    if (nd.derivation < 0) {
        j["derivation"] = nullptr;
        return j;
    }
    const KostantDerivation& d = atlas.derivation(static_cast<std::size_t>(nd.derivation));
    nlohmann::json dj;
    dj["rule"] = d.rule;
    dj["detail"] = d.detail;
    dj["premises"] = nlohmann::json::array();
    for (std::size_t p : d.premises)
        dj["premises"].push_back(derivation_json(atlas, p));
    j["derivation"] = std::move(dj);
    return j;
}

} // namespace

std::string report_json(const KostantAtlas& atlas, int rank) {
    nlohmann::json j;
    j["rank"] = rank;
    j["cells"] = nlohmann::json::array();
    int totals[3] = {0, 0, 0};
    for (std::size_t i : rank_nodes_sorted(atlas, rank)) {
        const KostantAtlas::Node& nd = atlas.nodes()[i];
        ++totals[static_cast<int>(nd.status)];
        j["cells"].push_back(derivation_json(atlas, i));
    }
    j["totals"]["positive"] = totals[static_cast<int>(KostantStatus::positive)];
    j["totals"]["negative"] = totals[static_cast<int>(KostantStatus::negative)];
    j["totals"]["unknown"] = totals[static_cast<int>(KostantStatus::unknown)];
    return j.dump(2) + "\n";
}

} // namespace cellkit
