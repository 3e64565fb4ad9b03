#pragma once

// Imaginary octonion units e1..e7 and the seven-dimensional cross product.
//
// Oriented Fano lines (a, b, c) mean e_a e_b = e_c, with the cyclic
// products e_b e_c = e_a and e_c e_a = e_b and the opposite sign under
// transposition.  data/octonion_table.json publishes the same table.

#include <array>
#include <string>

namespace nk6::octonion {

struct Line {
    int a, b, c;  // 1-based unit indices
};

const std::array<Line, 7>& fano_lines();

/// table[a-1][b-1] = signed 1-based index of e_a e_b; 0 on the diagonal (e_a^2 = -1).
using Table = std::array<std::array<int, 7>, 7>;
const Table& multiplication_table();

/// Reads a table published in the JSON layout {"table": [[...7 ints...] x7]}.
Table load_table(const std::string& path);

/// (u x v)_c = sum over lines of u_a v_b - u_b v_a, 0-based ambient components.
template <typename T>
std::array<T, 7> cross(const std::array<T, 7>& u, const std::array<T, 7>& v) {
    std::array<T, 7> r{};
    for (auto& x : r) x = T(0.0);
    for (const Line& l : fano_lines()) {
        const int a = l.a - 1, b = l.b - 1, c = l.c - 1;
        r[c] += u[a] * v[b] - u[b] * v[a];
        r[a] += u[b] * v[c] - u[c] * v[b];
        r[b] += u[c] * v[a] - u[a] * v[c];
    }
    return r;
}

}  // namespace nk6::octonion
