#pragma once
// Diagram serialization.
//
//   CSV    header "dim,birth,death", one interval per row, death "inf" for
//          essential classes, rows sorted by (dim, birth, death).
//   JSON   array of {"dim": k, "birth": b, "death": d}, death null for
//          essential classes, same order.

#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cubedual/persistence.hpp"

namespace cubedual {

inline void write_csv(const PersistenceDiagram& dgm, std::ostream& out) {
    out << "dim,birth,death\n";
    const PersistenceDiagram ordered = dgm.sorted();
    for (const Interval& ivl : ordered.intervals()) {
        out << ivl.dim << ',' << format_real(ivl.birth) << ',';
        out << (ivl.finite() ? format_real(*ivl.death) : "inf") << '\n';
    }
}

inline PersistenceDiagram read_csv(std::istream& in) {
    const std::string data = detail::slurp(in);
    PersistenceDiagram dgm;
    std::size_t pos = 0;
    bool saw_header = false;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string_view line(data.data() + pos, eol - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::size_t line_off = pos;
        pos = eol + 1;
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != "dim,birth,death")
                throw ParseError(line_off, "expected diagram header 'dim,birth,death'");
            saw_header = true;
            continue;
        }
        const std::size_t c1 = line.find(',');
        const std::size_t c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string_view::npos || line.find(',', c2 + 1) != std::string_view::npos)
            throw ParseError(line_off, "expected three comma-separated fields");
        long long dim = 0;
        Real birth = 0;
        if (!parse_integer(line.substr(0, c1), dim))
            throw ParseError(line_off, "malformed interval dimension");
        if (!parse_real(line.substr(c1 + 1, c2 - c1 - 1), birth))
            throw ParseError(line_off, "malformed birth value");
        const std::string_view death = line.substr(c2 + 1);
        if (death == "inf") {
            dgm.add(static_cast<int>(dim), birth);
        } else {
            Real d = 0;
            if (!parse_real(death, d)) throw ParseError(line_off, "malformed death value");
            dgm.add(static_cast<int>(dim), birth, d);
        }
    }
    if (!saw_header) throw ParseError(0, "expected diagram header 'dim,birth,death'");
    return dgm;
}

inline nlohmann::json to_json(const PersistenceDiagram& dgm) {
    nlohmann::json arr = nlohmann::json::array();
    const PersistenceDiagram ordered = dgm.sorted();
    for (const Interval& ivl : ordered.intervals()) {
        nlohmann::json row{{"dim", ivl.dim}, {"birth", ivl.birth}};
        row["death"] = ivl.finite() ? nlohmann::json(*ivl.death) : nlohmann::json(nullptr);
        arr.push_back(std::move(row));
    }
    return arr;
}

inline PersistenceDiagram diagram_from_json(const nlohmann::json& arr) {
    if (!arr.is_array()) throw ParseError(0, "expected a JSON array of intervals");
    PersistenceDiagram dgm;
    for (const auto& row : arr) {
        if (!row.is_object() || !row.contains("dim") || !row.contains("birth") || !row.contains("death"))
            throw ParseError(0, "interval objects need dim, birth and death");
        if (!row["dim"].is_number_integer() || !row["birth"].is_number())
            throw ParseError(0, "malformed interval object");
        if (row["death"].is_null())
            dgm.add(row["dim"].get<int>(), row["birth"].get<Real>());
        else if (row["death"].is_number())
            dgm.add(row["dim"].get<int>(), row["birth"].get<Real>(), row["death"].get<Real>());
        else
            throw ParseError(0, "malformed death value");
    }
    return dgm;
}

enum class DiagramFormat { csv, json };

inline void write_diagram(const PersistenceDiagram& dgm, std::ostream& out, DiagramFormat format) {
    if (format == DiagramFormat::csv) write_csv(dgm, out);
    else out << to_json(dgm).dump(2) << '\n';
}

}  // namespace cubedual
