#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "genus.hpp"
#include "search.hpp"

/// JSON and CSV renderings of reports.  Key order is fixed (ordered_json),
/// every number is an exact integer, and rendering is deterministic, so a
/// parse-and-redump round trip reproduces the output byte for byte.

namespace stgenus {

using json = nlohmann::ordered_json;

inline json matrix_json(const MatrixFp& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.nrows; ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.ncols; ++c) row.push_back(static_cast<int>(m.at(r, c)));
        rows.push_back(std::move(row));
    }
    return json{{"p", m.p},
                {"nrows", m.nrows},
                {"ncols", m.ncols},
                {"rowLabels", m.row_labels},
                {"colLabels", m.col_labels},
                {"rows", std::move(rows)}};
}

inline json instance_json(i64 d, const PlaceSets& p) {
    return json{{"d", d}, {"s0", p.s0}, {"sInf", p.s_inf}, {"t", p.t}};
}

inline json report_json(const ProblemInstance& inst, const GenusReport& rep) {
    json splitting = json::array();
    for (const auto& [place, type] : rep.splitting)
        splitting.push_back(json{{"place", place}, {"type", splitting_name(type)}});
    return json{{"sigma", inst.sigma},
                {"matrix", matrix_json(rep.matrix)},
                {"rank", rep.rank},
                {"log2G", rep.log2_g},
                {"g", rep.g},
                {"gStar", rep.g_star},
                {"rayClassOrder", rep.ray_class_order},
                {"splitting", std::move(splitting)},
                {"kernelBasis", rep.kernel_basis}};
}

inline json search_json(const SearchResult& res, const ProblemInstance& inst) {
    return json{{"sigma", res.sigma},
                {"d", res.d},
                {"maxPrime", res.max_prime},
                {"report", report_json(inst, res.report)}};
}

inline json envelope(const std::string& command, json input, json result, std::int64_t timing_ms) {
    return json{{"schemaVersion", "1"},
                {"command", command},
                {"input", std::move(input)},
                {"result", std::move(result)},
                {"timingMs", timing_ms}};
}

/// Canonical rendering used by every --json code path (and the round-trip
/// invariant: parse(render(j)) re-renders identically).
inline std::string render(const json& j) { return j.dump(2) + "\n"; }

inline std::string csv_header() { return "d,sigma,ncols,rank,log2_g,g,g_star"; }

/// One table row; sigma is ';'-joined so the CSV stays comma-clean.
inline std::string csv_row(const ProblemInstance& inst, const GenusReport& rep) {
    std::string sigma;
    for (std::size_t i = 0; i < inst.sigma.size(); ++i) {
        if (i) sigma += ';';
        sigma += std::to_string(inst.sigma[i]);
    }
    return std::to_string(inst.d) + "," + sigma + "," + std::to_string(rep.matrix.ncols) + "," +
           std::to_string(rep.rank) + "," + std::to_string(rep.log2_g) + "," +
           std::to_string(rep.g) + "," + std::to_string(rep.g_star);
}

}  // namespace stgenus
