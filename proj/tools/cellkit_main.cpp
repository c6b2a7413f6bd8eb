// cellkit: command-line frontend for exact Kazhdan-Lusztig
// combinatorics of symmetric groups.
//
// Conventions: all mathematical payload goes to stdout; progress and
// timing go to stderr. Exit codes: 0 success, 1 user error, 2 internal
// inconsistency.

#include "CLI11.hpp"

#include "cellkit/cells.hpp"
#include "cellkit/errors.hpp"
#include "cellkit/hecke.hpp"
#include "cellkit/kostant.hpp"
#include "cellkit/oshadow.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace cellkit;

int checked_rank(int rank) {
    if (rank < 2 || rank > SymmetricGroup::kMaxRank)
        throw user_error("rank out of supported range (2.." +
                         std::to_string(SymmetricGroup::kMaxRank) + ")");
    return rank;
}

std::filesystem::path effective_cache_dir(const std::string& flag) {
    if (!flag.empty())
        return flag;
    if (const char* env = std::getenv("CELLKIT_CACHE_DIR"); env && *env)
        return env;
    return {};
}

class Timer {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

KLTable obtain_table(const SymmetricGroup& g, const std::string& cache_flag, int threads) {
    Timer timer;
    bool from_cache = false;
    KLTable table =
        cached_kl_table(g, effective_cache_dir(cache_flag), {threads}, &from_cache);
    std::cerr << "[info] KL table rank " << g.rank() << ": "
              << (from_cache ? "loaded from cache" : "computed") << " in " << timer.ms()
              << " ms\n";
    return table;
}

// Default a-function policy: exact up to rank 4, fast (self-validated)
// beyond.
AFunction default_afn(const KLTable& table, int threads) {
    if (table.rank() <= 4)
        return AFunction::exact(table, threads);
    return AFunction::fast(table.group());
}

std::vector<ElementId> word_sorted_ids(const SymmetricGroup& g,
                                       const std::vector<ElementId>& ids) {
    std::vector<ElementId> out = ids;
    std::sort(out.begin(), out.end(), [&](ElementId a, ElementId b) {
        return g.canonical_word(g.element(a)) < g.canonical_word(g.element(b));
    });
    return out;
}

void print_kl_line(const SymmetricGroup& g, const KLTable& table, Element x, Element y) {
    std::cout << SymmetricGroup::word_str(g.canonical_word(x)) << '|'
              << SymmetricGroup::word_str(g.canonical_word(y)) << '|'
              << table.entry(x, y).str() << '\n';
}

void print_character(const SymmetricGroup& g, const GradedCharacter& ch) {
    for (const auto& [z, poly] : ch.mult)
        std::cout << SymmetricGroup::word_str(g.canonical_word(z)) << '\t' << poly.str()
                  << '\n';
}

std::vector<KostantSeed> gather_seeds(int max_rank, const std::string& seeds_file) {
    std::vector<KostantSeed> seeds;
    for (int rank = 2; rank <= max_rank; ++rank) {
        auto b = builtin_seeds(rank);
        seeds.insert(seeds.end(), b.begin(), b.end());
    }
    if (!seeds_file.empty()) {
        auto extra = load_seeds(seeds_file);
        seeds.insert(seeds.end(), extra.begin(), extra.end());
        std::cerr << "[info] loaded " << extra.size() << " seed(s) from " << seeds_file
                  << "\n";
    }
    return seeds;
}

KostantAtlas run_propagation(int max_rank, const std::string& seeds_file,
                             bool allow_product_rule, unsigned agenda_seed,
                             const std::string& cache_flag, int threads) {
    checked_rank(max_rank);
    PropagationOptions opts;
    opts.max_rank = max_rank;
    opts.allow_product_rule = allow_product_rule;
    opts.agenda_seed = agenda_seed;
    opts.threads = threads;
    opts.table_provider = [&](const SymmetricGroup& g) {
        return obtain_table(g, cache_flag, threads);
    };
    Timer timer;
    KostantAtlas atlas = propagate_kostant(gather_seeds(max_rank, seeds_file), opts);
    std::cerr << "[info] propagation over ranks 2.." << max_rank << " finished in "
              << timer.ms() << " ms\n";
    return atlas;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Kazhdan-Lusztig combinatorics for symmetric groups"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware default)");

    // --- kl ---------------------------------------------------------------
    auto* kl = app.add_subcommand("kl", "Kazhdan-Lusztig polynomials h_{x,y}");
    int kl_rank = 0;
    std::string kl_x, kl_y, kl_cache;
    kl->add_option("--rank", kl_rank, "symmetric group rank n (2..7)")->required();
    auto* kl_x_opt = kl->add_option("--x", kl_x, "row element, as a comma-separated word");
    auto* kl_y_opt = kl->add_option("--y", kl_y, "column element, as a comma-separated word");
    kl->add_option("--cache", kl_cache, "cache directory (default: $CELLKIT_CACHE_DIR)");
    kl->callback([&] {
        checked_rank(kl_rank);
        SymmetricGroup g(kl_rank);
        KLTable table = obtain_table(g, kl_cache, threads);
        const bool has_x = kl_x_opt->count() > 0;
        const bool has_y = kl_y_opt->count() > 0;
        if (has_x && has_y) {
            Laurent p = table.entry(g.from_word(SymmetricGroup::parse_word(kl_x)),
                                    g.from_word(SymmetricGroup::parse_word(kl_y)));
            std::cout << (p.is_zero() ? "0" : p.str()) << '\n';
        } else if (has_x) {
            Element x = g.from_word(SymmetricGroup::parse_word(kl_x));
            for (ElementId yid : word_sorted_ids(g, table.row_support(x)))
                print_kl_line(g, table, x, g.element(yid));
        } else if (has_y) {
            Element y = g.from_word(SymmetricGroup::parse_word(kl_y));
            std::vector<ElementId> xs;
            for (const auto& [xid, poly] : table.column(y))
                xs.push_back(xid);
            for (ElementId xid : word_sorted_ids(g, xs))
                print_kl_line(g, table, g.element(xid), y);
        } else {
            std::cout << table.serialize();
        }
    });

    // --- cells ------------------------------------------------------------
    auto* cells = app.add_subcommand("cells", "left/right cell partition, a-values, Duflo set");
    int cells_rank = 0;
    std::string cells_side = "both", cells_cache;
    cells->add_option("--rank", cells_rank, "symmetric group rank n (2..7)")->required();
    cells->add_option("--side", cells_side, "which cell ids to print")
        ->check(CLI::IsMember({"left", "right", "both"}));
    cells->add_option("--cache", cells_cache, "cache directory (default: $CELLKIT_CACHE_DIR)");
    cells->callback([&] {
        checked_rank(cells_rank);
        SymmetricGroup g(cells_rank);
        KLTable table = obtain_table(g, cells_cache, threads);
        auto [left, right] = CellPartition::left_and_right(table);
        AFunction afn = default_afn(table, threads);
        std::vector<char> is_duflo(g.size(), 0);
        for (Element d : duflo_elements(table, right, afn))
            is_duflo[d.id] = 1;
        for (Element x : g.elements_by_length()) {
            std::cout << SymmetricGroup::word_str(g.canonical_word(x));
            if (cells_side != "right")
                std::cout << '\t' << left.cell_of(x);
            if (cells_side != "left")
                std::cout << '\t' << right.cell_of(x);
            std::cout << '\t' << afn(x) << '\t' << int(is_duflo[x.id]) << '\n';
        }
    });

    // --- afn --------------------------------------------------------------
    auto* afn_cmd = app.add_subcommand("afn", "Lusztig a-function");
    int afn_rank = 0;
    std::string afn_mode, afn_cache;
    bool afn_slow = false;
    afn_cmd->add_option("--rank", afn_rank, "symmetric group rank n (2..7)")->required();
    afn_cmd->add_option("--mode", afn_mode, "exact | fast (default: exact to rank 4, fast above)")
        ->check(CLI::IsMember({"exact", "fast"}));
    afn_cmd->add_flag("--i-know-this-is-slow", afn_slow,
                      "confirm the quadratic exact computation at rank >= 6");
    afn_cmd->add_option("--cache", afn_cache, "cache directory (default: $CELLKIT_CACHE_DIR)");
    afn_cmd->callback([&] {
        checked_rank(afn_rank);
        SymmetricGroup g(afn_rank);
        const std::string mode = !afn_mode.empty() ? afn_mode
                                 : afn_rank <= 4   ? std::string("exact")
                                                   : std::string("fast");
        AFunction afn = [&] {
            if (mode == "fast")
                return AFunction::fast(g);
            if (afn_rank >= 6 && !afn_slow)
                throw user_error("exact a-function at rank >= 6 runs " +
                                 std::to_string(g.size()) + "^2 Hecke products; pass "
                                 "--i-know-this-is-slow to confirm, or use --mode fast");
            KLTable table = obtain_table(g, afn_cache, threads);
            return AFunction::exact(table, threads);
        }();
        for (Element x : g.elements_by_length())
            std::cout << SymmetricGroup::word_str(g.canonical_word(x)) << '\t' << afn(x)
                      << '\n';
    });

    // --- duflo ------------------------------------------------------------
    auto* duflo_cmd = app.add_subcommand("duflo", "Duflo elements, one per right cell");
    int duflo_rank = 0;
    std::string duflo_cache;
    duflo_cmd->add_option("--rank", duflo_rank, "symmetric group rank n (2..7)")->required();
    duflo_cmd->add_option("--cache", duflo_cache,
                          "cache directory (default: $CELLKIT_CACHE_DIR)");
    duflo_cmd->callback([&] {
        checked_rank(duflo_rank);
        SymmetricGroup g(duflo_rank);
        KLTable table = obtain_table(g, duflo_cache, threads);
        CellPartition right = CellPartition::right_cells(table);
        AFunction afn = default_afn(table, threads);
        for (Element d : duflo_elements(table, right, afn))
            std::cout << SymmetricGroup::word_str(g.canonical_word(d)) << '\t' << afn(d)
                      << '\n';
    });

    // --- theta ------------------------------------------------------------
    auto* theta_cmd = app.add_subcommand("theta", "graded character of theta_x L(x^-1)");
    int theta_rank = 0;
    std::string theta_x, theta_cache;
    theta_cmd->add_option("--rank", theta_rank, "symmetric group rank n (2..7)")->required();
    theta_cmd->add_option("--x", theta_x, "element, as a comma-separated word")->required();
    theta_cmd->add_option("--cache", theta_cache,
                          "cache directory (default: $CELLKIT_CACHE_DIR)");
    theta_cmd->callback([&] {
        checked_rank(theta_rank);
        SymmetricGroup g(theta_rank);
        KLTable table = obtain_table(g, theta_cache, threads);
        Element x = g.from_word(SymmetricGroup::parse_word(theta_x));
        print_character(g, theta_simple_character(table, x));
    });

    // --- quasisimple ------------------------------------------------------
    auto* quasi_cmd =
        app.add_subcommand("quasisimple", "quasi-simple quotient: Duflo element + checks");
    int quasi_rank = 0;
    std::string quasi_x, quasi_cache;
    quasi_cmd->add_option("--rank", quasi_rank, "symmetric group rank n (2..7)")->required();
    quasi_cmd->add_option("--x", quasi_x, "element, as a comma-separated word")->required();
    quasi_cmd->add_option("--cache", quasi_cache,
                          "cache directory (default: $CELLKIT_CACHE_DIR)");
    quasi_cmd->callback([&] {
        checked_rank(quasi_rank);
        SymmetricGroup g(quasi_rank);
        KLTable table = obtain_table(g, quasi_cache, threads);
        CellPartition right = CellPartition::right_cells(table);
        AFunction afn = default_afn(table, threads);
        Element x = g.from_word(SymmetricGroup::parse_word(quasi_x));
        QuasiSimpleReport report = quasi_simple_report(table, right, afn, x);
        print_character(g, report.character);
        std::cout << "DUFLO=" << SymmetricGroup::word_str(g.canonical_word(report.duflo))
                  << '\n';
        std::cout << "degree_bound " << (report.degree_bounded ? "PASS" : "FAIL") << '\n';
        std::cout << "symmetry " << (report.symmetric ? "PASS" : "FAIL") << '\n';
        std::cout << "duflo_minimum " << (report.duflo_minimum ? "PASS" : "FAIL") << '\n';
        if (!report.all_pass())
            throw internal_error("quasi-simple verification failed for x = '" + quasi_x +
                                 "' at rank " + std::to_string(quasi_rank));
    });

    // --- propagate --------------------------------------------------------
    auto* prop_cmd =
        app.add_subcommand("propagate", "propagate Kostant statuses across ranks and cells");
    int prop_max_rank = 6;
    std::string prop_seeds, prop_cache;
    bool prop_product = false;
    unsigned prop_agenda = 0;
    prop_cmd->add_option("--max-rank", prop_max_rank, "propagate over ranks 2..N (default 6)");
    prop_cmd->add_option("--seeds", prop_seeds, "JSON seed file merged with the builtin seeds");
    prop_cmd->add_flag("--allow-product-rule", prop_product,
                       "enable the factor-wise rule for disconnected generator subsets");
    prop_cmd->add_option("--agenda-seed", prop_agenda,
                         "nonzero: randomized agenda order (result must not change)");
    prop_cmd->add_option("--cache", prop_cache,
                         "cache directory (default: $CELLKIT_CACHE_DIR)");
    prop_cmd->callback([&] {
        KostantAtlas atlas = run_propagation(prop_max_rank, prop_seeds, prop_product,
                                             prop_agenda, prop_cache, threads);
        std::cout << report_tsv(atlas, prop_max_rank);
    });

    // --- report -----------------------------------------------------------
    auto* rep_cmd = app.add_subcommand("report", "per-rank Kostant report after propagation");
    int rep_max_rank = 6, rep_rank = 0;
    std::string rep_seeds, rep_cache, rep_format = "tsv";
    bool rep_product = false;
    rep_cmd->add_option("--max-rank", rep_max_rank, "propagate over ranks 2..N (default 6)");
    rep_cmd->add_option("--rank", rep_rank, "rank to report (default: max-rank)");
    rep_cmd->add_option("--format", rep_format, "tsv | json")
        ->check(CLI::IsMember({"tsv", "json"}));
    rep_cmd->add_option("--seeds", rep_seeds, "JSON seed file merged with the builtin seeds");
    rep_cmd->add_flag("--allow-product-rule", rep_product,
                      "enable the factor-wise rule for disconnected generator subsets");
    rep_cmd->add_option("--cache", rep_cache,
                        "cache directory (default: $CELLKIT_CACHE_DIR)");
    rep_cmd->callback([&] {
        const int rank = rep_rank == 0 ? rep_max_rank : rep_rank;
        if (rank < 2 || rank > rep_max_rank)
            throw user_error("--rank must lie in 2..max-rank");
        KostantAtlas atlas =
            run_propagation(rep_max_rank, rep_seeds, rep_product, 0, rep_cache, threads);
        std::cout << (rep_format == "json" ? report_json(atlas, rank)
                                           : report_tsv(atlas, rank));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    } catch (const user_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
