#pragma once

#include "cellkit/cells.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace cellkit {

// Answer status for Kostant's problem on a simple highest-weight
// module, tracked per left cell (the answer is a left-cell invariant;
// each left cell is keyed by its unique involution).
enum class KostantStatus { unknown, positive, negative };

const char* status_name(KostantStatus s);

// An externally supplied answer: the element given by `word` inside
// S_rank has the stated status; `source` is a free-text citation.
struct KostantSeed {
    int rank = 0;
    Word word;
    KostantStatus status = KostantStatus::unknown;
    std::string source;
};

// The two classical seeds available at every rank: the cells of the
// identity (finite-dimensional simple) and of the longest element
// (simple antidominant Verma) are positive.
std::vector<KostantSeed> builtin_seeds(int rank);

// Seed file: a UTF-8 JSON array of objects with fields
//   rank (integer), word (string, word syntax), status
//   ("positive"|"negative"), source (string).
// Throws parse_error / user_error on malformed input, unknown status,
// non-element words, or rank outside 2..7.
std::vector<KostantSeed> load_seeds(const std::filesystem::path& path);

struct PropagationOptions {
    int max_rank = 6; // ranks 2..max_rank are coupled and built together
    // The factor-wise rule for disconnected generator subsets
    // (conjunction over the factors). Off by default; derivations using
    // it are flagged in provenance.
    bool allow_product_rule = false;
    // Nonzero: process the agenda in a pseudo-random order. The fixpoint
    // is confluent, so the final statuses must not depend on this.
    unsigned agenda_seed = 0;
    // Optional override for obtaining KL tables (e.g. disk-cached).
    std::function<KLTable(const SymmetricGroup&)> table_provider;
    int threads = 0;
};

// One derivation step; premises index nodes of the atlas.
struct KostantDerivation {
    std::string rule; // "seed" | "induction" | "symmetry" | "product"
    std::string detail;
    std::vector<std::size_t> premises;
};

// The result of a propagation run: for every rank in 2..max_rank, the
// left-cell partition plus a status and derivation per cell.
class KostantAtlas {
public:
    struct Node {
        int rank = 0;
        int cell = 0;
        Element involution; // the cell's unique involution
        KostantStatus status = KostantStatus::unknown;
        std::ptrdiff_t derivation = -1; // index into derivations(), -1 = none
    };

    int max_rank() const { return max_rank_; }
    const SymmetricGroup& group(int rank) const;
    const CellPartition& left_cells(int rank) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    std::size_t node_index(int rank, int cell) const;
    const Node& node(int rank, int cell) const { return nodes_[node_index(rank, cell)]; }
    const KostantDerivation& derivation(std::size_t index) const { return derivations_[index]; }

    // Status of the cell containing x.
    KostantStatus status(int rank, Element x) const;

    // One-line provenance chain for a node ("rule[detail] <- ...").
    std::string provenance_summary(std::size_t node) const;
    // Indented multi-line derivation tree.
    std::string derivation_tree(std::size_t node) const;

private:
    int max_rank_ = 0;
    std::vector<std::unique_ptr<SymmetricGroup>> groups_; // index rank-2
    std::vector<CellPartition> left_;                     // index rank-2
    std::vector<std::size_t> offset_;                     // node index base per rank
    std::vector<Node> nodes_;
    std::vector<KostantDerivation> derivations_;

    KostantAtlas() = default;
    friend KostantAtlas propagate_kostant(const std::vector<KostantSeed>&,
                                          const PropagationOptions&);
};

// Runs the fixpoint: ingests seeds (statuses attach to whole left
// cells), then closes under
//   RULE-IND  (bidirectional): for each rank n, each interval
//             I = {a..b} inside {1..n-1} with |I|+1 < n, and each
//             x in W_I: the rank-(|I|+1) cell of the relabelled x and
//             the rank-n cell of x * w0(I) * w0 share their status;
//   RULE-SYM  status is invariant under conjugation by w0;
//   product   (only with allow_product_rule): for disconnected I the
//             lifted cell's status is the conjunction of the statuses
//             of the relabelled factors.
// Conflicting assignments abort with internal_error carrying both
// derivation trees. Statuses never flip; the fixpoint is confluent.
KostantAtlas propagate_kostant(const std::vector<KostantSeed>& seeds,
                               const PropagationOptions& opts = {});

// Per-rank report. TSV: one row per cell, sorted by (length, word) of
// the involution: `word<TAB>status<TAB>provenance`, then a final line
// `positive=<a> negative=<b> unknown=<c>`. JSON mirrors the same data
// with full derivation trees.
std::string report_tsv(const KostantAtlas& atlas, int rank);
std::string report_json(const KostantAtlas& atlas, int rank);

} // namespace cellkit
