#include "nk6/octonion.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace nk6::octonion {

const std::array<Line, 7>& fano_lines() {
    // e1e2=e3, e1e4=e5, e2e4=e6, e3e4=e7, e2e5=e7, e6e1=e7, e5e3=e6
    static const std::array<Line, 7> lines{{
        {1, 2, 3}, {1, 4, 5}, {2, 4, 6}, {3, 4, 7}, {2, 5, 7}, {6, 1, 7}, {5, 3, 6},
    }};
    return lines;
}

const Table& multiplication_table() {
    static const Table t = [] {
        Table m{};
        for (const Line& l : fano_lines()) {
            const std::array<std::array<int, 3>, 3> cyc{{{l.a, l.b, l.c}, {l.b, l.c, l.a}, {l.c, l.a, l.b}}};
            for (const auto& [x, y, z] : cyc) {
                m[x - 1][y - 1] = z;
                m[y - 1][x - 1] = -z;
            }
        }
        return m;
    }();
    return t;
}

Table load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open octonion table: " + path);
    const auto j = nlohmann::json::parse(in);
    Table t{};
    const auto& rows = j.at("table");
    if (rows.size() != 7) throw std::runtime_error("octonion table must have 7 rows");
    for (int a = 0; a < 7; ++a) {
        if (rows[a].size() != 7) throw std::runtime_error("octonion table rows must have 7 entries");
        for (int b = 0; b < 7; ++b) t[a][b] = rows[a][b].get<int>();
    }
    return t;
}

}  // namespace nk6::octonion
