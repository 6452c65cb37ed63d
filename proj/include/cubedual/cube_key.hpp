#pragma once
// Cells of a cubical grid are identified by doubled coordinates: an even
// entry 2l stands for the degenerate interval [l,l], an odd entry 2l+1 for
// the unit interval [l,l+1]. The number of odd entries is the dimension of
// the cube, and passing from a cube to a facet replaces one odd entry by an
// even neighbour.

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "cubedual/common.hpp"

namespace cubedual {

struct CubeKey {
    std::vector<std::int32_t> coords;

    int dimension() const {
        int k = 0;
        for (std::int32_t c : coords) k += static_cast<int>(c & 1);
        return k;
    }

    bool operator==(const CubeKey&) const = default;
    auto operator<=>(const CubeKey&) const = default;  // lexicographic

    std::string to_string() const {
        std::string s = "(";
        for (std::size_t a = 0; a < coords.size(); ++a) {
            if (a) s += ',';
            s += std::to_string(coords[a]);
        }
        s += ')';
        return s;
    }
};

/// Face relation of the doubled grid: every coordinate of `face` equals the
/// matching coordinate of `cube` or is an even neighbour of an odd one.
/// Ignores periodic wrap-around, so use it on box complexes only.
inline bool is_face_of(const CubeKey& face, const CubeKey& cube) {
    if (face.coords.size() != cube.coords.size()) return false;
    for (std::size_t a = 0; a < cube.coords.size(); ++a) {
        std::int32_t f = face.coords[a];
        std::int32_t c = cube.coords[a];
        if (f == c) continue;
        if ((c & 1) && (f == c - 1 || f == c + 1)) continue;
        return false;
    }
    return true;
}

}  // namespace cubedual
