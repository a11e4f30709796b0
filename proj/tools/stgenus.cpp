#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stgenus/genus.hpp"
#include "stgenus/oracle.hpp"
#include "stgenus/search.hpp"
#include "stgenus/selftest.hpp"
#include "stgenus/serialize.hpp"

namespace {

using namespace stgenus;
using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case errc::budget_exhausted:
            return 3;
        case errc::io_error:
            return 4;
        case errc::internal_check:
        case errc::verification_failed:
        case errc::dimension_mismatch:
        case errc::not_independent:
            return 1;  // broken internal invariant
        default:
            return 2;  // invalid input
    }
}

std::string join_i64(const std::vector<i64>& xs) {
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(xs[i]);
    }
    return out + "}";
}

void print_matrix(std::ostream& os, const MatrixFp& m) {
    std::size_t rlw = 0;
    for (const auto& l : m.row_labels) rlw = std::max(rlw, l.size());
    std::vector<std::size_t> cw(m.ncols, 1);
    for (std::size_t c = 0; c < m.col_labels.size(); ++c)
        cw[c] = std::max<std::size_t>(1, m.col_labels[c].size());

    os << std::string(rlw + 4, ' ');
    for (std::size_t c = 0; c < m.ncols; ++c) {
        const std::string& l = c < m.col_labels.size() ? m.col_labels[c] : "";
        os << std::string(cw[c] - l.size() + 1, ' ') << l;
    }
    os << "\n";
    for (std::size_t r = 0; r < m.nrows; ++r) {
        const std::string& l = r < m.row_labels.size() ? m.row_labels[r] : "";
        os << "  " << std::string(rlw - l.size(), ' ') << l << " [";
        for (std::size_t c = 0; c < m.ncols; ++c)
            os << std::string(cw[c], ' ') << static_cast<int>(m.at(r, c));
        os << " ]\n";
    }
    if (m.nrows == 0) os << "  (no rows: the congruence subgroup is trivial)\n";
}

void print_report(std::ostream& os, const ProblemInstance& inst, const GenusReport& rep) {
    os << "d = " << inst.d << "   Sigma = " << join_i64(inst.sigma)
       << "   S0 = " << join_i64(inst.places.s0) << "   sInf = "
       << (inst.places.s_inf ? "true" : "false") << "   T = " << join_i64(inst.places.t) << "\n\n";
    print_matrix(os, rep.matrix);
    os << "\nrank = " << rep.rank << "\n";
    os << "g = " << rep.g << " = 2^" << rep.log2_g << "\n";
    os << "g* = " << rep.g_star << "   (ray class order " << rep.ray_class_order << ")\n";
    os << "kernel basis:";
    if (rep.kernel_basis.empty()) os << " (trivial)";
    for (const auto& subset : rep.kernel_basis) {
        os << " {";
        for (std::size_t i = 0; i < subset.size(); ++i) {
            if (i) os << ",";
            os << subset[i];
        }
        os << "}";
    }
    os << "\nsplitting:";
    for (const auto& [place, type] : rep.splitting)
        os << " " << place << ":" << splitting_name(type);
    os << "\n";
}

struct InstanceFlags {
    i64 d = 0;
    std::vector<i64> s0;
    bool s_inf = false;
    std::vector<i64> t;
    bool as_json = false;
    bool as_pretty = false;

    ProblemInstance make() const {
        return ProblemInstance::make(d, PlaceSets::make(s0, s_inf, t));
    }
};

void add_instance_flags(CLI::App* cmd, InstanceFlags& f, bool with_t = true) {
    cmd->add_option("d", f.d, "squarefree integer, not 0 or 1")->required();
    cmd->add_option("--s0", f.s0, "finite S-places (primes; splitting is relaxed there)");
    cmd->add_flag("--sinf", f.s_inf, "relax the real place (put infinity into S)");
    if (with_t) cmd->add_option("--t", f.t, "T-congruence primes (odd, coprime to 2d)");
    auto* j = cmd->add_flag("--json", f.as_json, "machine-readable envelope");
    cmd->add_flag("--pretty", f.as_pretty, "human-readable report (default)")->excludes(j);
}

int run_genus(const InstanceFlags& f) {
    const auto start = Clock::now();
    auto inst = f.make();
    auto rep = genus_number(inst);
    if (f.as_json) {
        std::cout << render(envelope("genus", instance_json(f.d, inst.places),
                                     report_json(inst, rep), ms_since(start)));
    } else {
        print_report(std::cout, inst, rep);
    }
    return 0;
}

int run_crosscheck(const InstanceFlags& f) {
    const auto start = Clock::now();
    auto inst = f.make();
    auto rep = genus_number(inst);
    const MatrixFp other = build_matrix_hilbert(inst);
    const u64 formula_g = genus_via_formula(inst);

    json diff = nullptr;
    for (std::size_t r = 0; r < rep.matrix.nrows && diff.is_null(); ++r)
        for (std::size_t c = 0; c < rep.matrix.ncols && diff.is_null(); ++c)
            if (rep.matrix.at(r, c) != other.at(r, c))
                diff = json{{"row", r},
                            {"col", c},
                            {"rowLabel", rep.matrix.row_labels[r]},
                            {"colLabel", rep.matrix.col_labels[c]},
                            {"caserule", rep.matrix.at(r, c)},
                            {"hilbert", other.at(r, c)}};
    const bool match = diff.is_null() && rep.matrix == other && rep.g == formula_g;

    if (f.as_json) {
        json result{{"match", match},
                    {"g", rep.g},
                    {"gFormula", formula_g},
                    {"matrix", matrix_json(rep.matrix)},
                    {"firstDiff", diff}};
        std::cout << render(envelope("crosscheck", instance_json(f.d, inst.places),
                                     std::move(result), ms_since(start)));
    } else if (match) {
        std::cout << "match: case-rule and local-norm pipelines agree\n\n";
        print_report(std::cout, inst, rep);
        std::cout << "norm-index formula g = " << formula_g << "\n";
    } else if (!diff.is_null()) {
        std::cout << "MISMATCH at row " << diff["row"] << " (" << diff["rowLabel"] << "), column "
                  << diff["col"] << " (" << diff["colLabel"] << "): case rule "
                  << diff["caserule"] << ", local norm " << diff["hilbert"] << "\n";
    } else {
        std::cout << "MISMATCH: kernel count g = " << rep.g << " but norm-index formula gives "
                  << formula_g << "\n";
    }
    return match ? 0 : 1;
}

int run_search(std::size_t m, std::size_t k, const std::vector<i64>& s0, i64 budget,
               bool as_json) {
    const auto start = Clock::now();
    auto spec = SearchSpec::make(PlaceSets::make(s0, true, {}), m, k, budget);
    auto res = run_search(spec);
    auto inst = ProblemInstance::make(res.d, spec.places);
    if (as_json) {
        json input{{"s0", spec.places.s0},
                   {"sInf", true},
                   {"m", m},
                   {"k", k},
                   {"primeBudget", budget}};
        std::cout << render(envelope("search", std::move(input), search_json(res, inst),
                                     ms_since(start)));
    } else {
        std::cout << "Sigma = " << join_i64(res.sigma) << "   d = " << res.d
                  << "   largest prime scanned into Sigma = " << res.max_prime << "\n\n";
        print_report(std::cout, inst, res.report);
    }
    return 0;
}

int run_table(i64 dmin, i64 dmax, const std::vector<i64>& s0, bool s_inf,
              const std::vector<i64>& t, const std::string& csv_path) {
    detail::require(dmin <= dmax, errc::invalid_range, "need dmin <= dmax");
    detail::require(dmax - dmin < 1000000, errc::invalid_range,
                    "table range capped at 10^6 entries");
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!csv_path.empty()) {
        file.open(csv_path);
        detail::require(file.good(), errc::io_error, "cannot open " + csv_path);
        os = &file;
    }
    auto places = PlaceSets::make(s0, s_inf, t);
    *os << csv_header() << "\n";
    for (i64 d = dmin; d <= dmax; ++d) {
        if (d == 0 || d == 1) continue;
        try {
            auto inst = ProblemInstance::make(d, places);
            auto rep = genus_number(inst);
            *os << csv_row(inst, rep) << "\n";
        } catch (const Error& e) {
            if (e.code() == errc::not_squarefree || e.code() == errc::invalid_discriminant ||
                e.code() == errc::overlap)
                continue;  // d not admissible for this S/T; skip the row
            throw;
        }
        detail::require(os->good(), errc::io_error, "write failure");
    }
    os->flush();
    detail::require(os->good(), errc::io_error, "write failure");
    return 0;
}

int run_selftest_cmd(bool as_json) {
    const auto start = Clock::now();
    auto report = run_selftest();
    if (as_json) {
        json suites = json::array();
        for (const auto& s : report.suites)
            suites.push_back(json{{"name", s.name}, {"passed", s.passed}, {"detail", s.detail}});
        json result{{"suites", std::move(suites)}, {"failures", report.failures}};
        std::cout << render(envelope("selftest", json::object(), std::move(result),
                                     ms_since(start)));
    } else {
        for (const auto& s : report.suites) {
            std::cout << (s.passed ? "PASS " : "FAIL ") << s.name;
            if (!s.passed) std::cout << "  (" << s.detail << ")";
            std::cout << "\n";
        }
        std::cout << report.suites.size() - report.failures << "/" << report.suites.size()
                  << " suites passed\n";
    }
    return report.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Genus numbers of quadratic fields via symbol matrices over F2"};
    app.require_subcommand(1);

    InstanceFlags genus_flags;
    auto* genus_cmd = app.add_subcommand("genus", "kernel-size genus number of Q(sqrt(d))");
    add_instance_flags(genus_cmd, genus_flags);

    InstanceFlags cross_flags;
    auto* cross_cmd = app.add_subcommand(
        "crosscheck", "case-rule matrix vs exhaustive local norms, kernel vs norm-index formula");
    add_instance_flags(cross_cmd, cross_flags);

    std::size_t search_m = 1, search_k = 1;
    std::vector<i64> search_s0;
    i64 search_budget = 100000;
    bool search_json = false, search_pretty = false;
    auto* search_cmd = app.add_subcommand(
        "search", "find m primes whose product realises genus 2^k with prescribed splitting");
    search_cmd->add_option("-m,--ramified", search_m, "number of ramified primes")->required();
    search_cmd->add_option("-k,--exponent", search_k, "target genus exponent: g = 2^k")
        ->required();
    search_cmd->add_option("--s0", search_s0, "finite primes that must split");
    search_cmd->add_option("--budget", search_budget, "largest prime the scan may use");
    auto* sj = search_cmd->add_flag("--json", search_json, "machine-readable envelope");
    search_cmd->add_flag("--pretty", search_pretty, "human-readable report (default)")
        ->excludes(sj);

    i64 table_dmin = 0, table_dmax = 0;
    std::vector<i64> table_s0, table_t;
    bool table_sinf = false;
    std::string table_csv;
    auto* table_cmd = app.add_subcommand("table", "CSV of genus data over a range of d");
    table_cmd->add_option("--dmin", table_dmin, "first d")->required();
    table_cmd->add_option("--dmax", table_dmax, "last d")->required();
    table_cmd->add_option("--s0", table_s0, "finite S-places");
    table_cmd->add_flag("--sinf", table_sinf, "relax the real place");
    table_cmd->add_option("--t", table_t, "T-congruence primes");
    table_cmd->add_option("--csv", table_csv, "output path (default stdout)");

    bool selftest_json = false;
    auto* selftest_cmd = app.add_subcommand("selftest", "run the built-in invariant suites");
    selftest_cmd->add_flag("--json", selftest_json, "machine-readable envelope");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // help/version are success; parse failures are input errors
    }

    try {
        if (genus_cmd->parsed()) return run_genus(genus_flags);
        if (cross_cmd->parsed()) return run_crosscheck(cross_flags);
        if (search_cmd->parsed())
            return run_search(search_m, search_k, search_s0, search_budget, search_json);
        if (table_cmd->parsed())
            return run_table(table_dmin, table_dmax, table_s0, table_sinf, table_t, table_csv);
        if (selftest_cmd->parsed()) return run_selftest_cmd(selftest_json);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
