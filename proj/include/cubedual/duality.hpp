#pragma once
// Duality of filtered complexes. Dualizing a closed complex and running the
// filtration backwards anti-transposes the boundary matrix, so the pairing of
// the dual read in reversed positions must match the pairing of the primal,
// and diagrams translate by an explicit degree-flipping map. check_dual_pairing
// verifies all of that on an actual complex; the builders below produce the
// image-derived dual pairs on which the diagram transforms rest.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubedual/complex_ops.hpp"
#include "cubedual/cubical.hpp"
#include "cubedual/persistence.hpp"

namespace cubedual {

struct DualityReport {
    bool pass = true;
    Index cells = 0;
    Index pairs_checked = 0;
    Index essential_checked = 0;
    bool antitranspose_equal = true;
    std::vector<std::string> mismatches;  // capped at kMaxMismatches entries

    static constexpr std::size_t kMaxMismatches = 20;

    void note(std::string what) {
        pass = false;
        if (mismatches.size() < kMaxMismatches) mismatches.push_back(std::move(what));
    }
};

/// Dualizes `cx`, orders the dual by the reversed primal order, and verifies
/// the three duality facts directly: the dual boundary matrix equals the
/// anti-transpose of the primal one, (i, j) is a pair exactly when
/// (n - j, n - i) is a dual pair, and position i is essential exactly when
/// n - i is. Positions refer to sort_cells(cx).
inline DualityReport check_dual_pairing(const FilteredComplex& cx, int d) {
    DualityReport rep;
    rep.cells = cx.size();
    const Ordering ord = sort_cells(cx);
    const Index n = ord.size() - 1;
    const BoundaryMatrix primal = boundary_matrix(cx, ord);

    const FilteredComplex dual = dualize(cx, d);
    std::vector<Index> reversed(static_cast<std::size_t>(ord.size()));
    for (Index pos = 0; pos < ord.size(); ++pos)
        reversed[static_cast<std::size_t>(pos)] = ord.perm[static_cast<std::size_t>(n - pos)];
    const Ordering dual_ord = make_ordering(dual, std::move(reversed));
    const BoundaryMatrix dual_mat = boundary_matrix(dual, dual_ord);

    rep.antitranspose_equal = dual_mat == anti_transpose(primal);
    if (!rep.antitranspose_equal) rep.note("dual boundary matrix differs from the anti-transpose");

    const PersistencePairing p = reduce(primal);
    const PersistencePairing q = reduce(dual_mat);

    std::vector<std::pair<Index, Index>> expected;
    expected.reserve(p.pairs.size());
    for (auto [i, j] : p.pairs) expected.emplace_back(n - j, n - i);
    std::sort(expected.begin(), expected.end());
    if (expected != q.pairs) {
        for (auto [i, j] : p.pairs) {
            if (std::binary_search(q.pairs.begin(), q.pairs.end(), std::make_pair(n - j, n - i)))
                continue;
            rep.note("pair (" + std::to_string(i) + "," + std::to_string(j) + ") values (" +
                     format_real(ord.values[static_cast<std::size_t>(i)]) + "," +
                     format_real(ord.values[static_cast<std::size_t>(j)]) + ") has no dual pair (" +
                     std::to_string(n - j) + "," + std::to_string(n - i) + ")");
        }
        for (auto [i, j] : q.pairs) {
            if (std::binary_search(expected.begin(), expected.end(), std::make_pair(i, j))) continue;
            rep.note("dual pair (" + std::to_string(i) + "," + std::to_string(j) +
                     ") has no primal counterpart");
        }
    }
    rep.pairs_checked = static_cast<Index>(p.pairs.size());

    std::vector<Index> expected_essential;
    expected_essential.reserve(p.essential.size());
    for (Index i : p.essential) expected_essential.push_back(n - i);
    std::sort(expected_essential.begin(), expected_essential.end());
    if (expected_essential != q.essential) {
        for (Index i : p.essential)
            if (!std::binary_search(q.essential.begin(), q.essential.end(), n - i))
                rep.note("essential position " + std::to_string(i) + " value " +
                         format_real(ord.values[static_cast<std::size_t>(i)]) +
                         " is not essential in the dual at " + std::to_string(n - i));
        for (Index i : q.essential)
            if (!std::binary_search(expected_essential.begin(), expected_essential.end(), i))
                rep.note("dual essential position " + std::to_string(i) + " has no primal counterpart");
    }
    rep.essential_checked = static_cast<Index>(p.essential.size());
    return rep;
}

/// Diagram-level dual map for a closed d-complex: a finite interval [p, q) in
/// degree k becomes [-q, -p) in degree d - k - 1; an essential class born at
/// b becomes one born at -b in degree d - k. An involution.
inline PersistenceDiagram map_diagram_dual(const PersistenceDiagram& dgm, int d) {
    PersistenceDiagram out;
    for (const Interval& ivl : dgm.intervals()) {
        if (ivl.dim < 0 || ivl.dim > d)
            throw PreconditionError("map_diagram_dual: degree " + std::to_string(ivl.dim) +
                                    " outside [0," + std::to_string(d) + "]");
        if (ivl.finite()) {
            if (ivl.dim == d)
                throw PreconditionError("map_diagram_dual: finite interval in degree d has no dual degree");
            out.add(d - ivl.dim - 1, negated_value(*ivl.death), negated_value(ivl.birth));
        } else {
            out.add(d - ivl.dim, negated_value(ivl.birth));
        }
    }
    return out;
}

// Closed complexes derived from an image, `shell` being a value strictly
// above the image maximum. The first two cap a box with one top cell; the
// last two collapse the constant shell of the negated padded image to a
// vertex. Dualization swaps the capped complexes with the collapsed ones.

inline FilteredComplex t_construction_with_cap(const GrayscaleImage& img, Real shell) {
    return attach_top_cell(build_t_complex(img), shell);
}

inline FilteredComplex v_construction_padded_with_cap(const GrayscaleImage& img, Real shell) {
    return attach_top_cell(build_v_complex(pad(img, shell)), shell);
}

inline FilteredComplex v_construction_negated_collapsed(const GrayscaleImage& img, Real shell) {
    return quotient_boundary(build_v_complex(negate(pad(img, shell))), negated_value(shell));
}

inline FilteredComplex t_construction_negated_collapsed(const GrayscaleImage& img, Real shell) {
    return quotient_boundary(build_t_complex(negate(pad(img, shell))), negated_value(shell));
}

struct IsomorphismReport {
    bool pass = true;
    std::vector<std::string> mismatches;

    void note(std::string what) {
        pass = false;
        if (mismatches.size() < DualityReport::kMaxMismatches) mismatches.push_back(std::move(what));
    }
};

/// Verifies that dualize(primal, d) equals `expected` cell for cell under the
/// coordinate shift key -> key + 1 (per axis, modulo `modulus` when given):
/// matching dimensions, values, and facet sets, with a cap cell on the primal
/// side landing on the collapsed-boundary vertex of `expected`.
inline IsomorphismReport check_shifted_dual_isomorphism(
    const FilteredComplex& primal, const FilteredComplex& expected, int d,
    std::optional<std::vector<std::int32_t>> modulus = std::nullopt) {
    IsomorphismReport rep;
    const FilteredComplex dual = dualize(primal, d);
    if (dual.size() != expected.size()) {
        rep.note("cell counts differ: " + std::to_string(dual.size()) + " vs " +
                 std::to_string(expected.size()));
        return rep;
    }

    std::map<CubeKey, Index> by_key;
    Index boundary_vertex = -1;
    for (Index i = 0; i < expected.size(); ++i) {
        const CellLabel& label = expected[i].label;
        if (label.kind == LabelKind::cube) by_key.emplace(label.key, i);
        else if (label.kind == LabelKind::boundary_class) boundary_vertex = i;
    }

    std::vector<Index> image_of(static_cast<std::size_t>(dual.size()), -1);
    for (Index i = 0; i < dual.size(); ++i) {
        const CellLabel& label = dual[i].label;
        if (label.kind == LabelKind::cube) {
            CubeKey shifted = label.key;
            for (std::size_t a = 0; a < shifted.coords.size(); ++a) {
                shifted.coords[a] += 1;
                if (modulus) shifted.coords[a] %= (*modulus)[a];
            }
            auto it = by_key.find(shifted);
            if (it == by_key.end()) {
                rep.note("no cell with key " + shifted.to_string());
                continue;
            }
            image_of[static_cast<std::size_t>(i)] = it->second;
        } else if (label.kind == LabelKind::cap_cell) {
            if (boundary_vertex < 0) {
                rep.note("cap cell has no collapsed-boundary partner");
                continue;
            }
            image_of[static_cast<std::size_t>(i)] = boundary_vertex;
        } else {
            rep.note("cell " + std::to_string(i) + " has unexpected label " + label.to_string());
        }
    }
    if (!rep.pass) return rep;

    for (Index i = 0; i < dual.size(); ++i) {
        const Index m = image_of[static_cast<std::size_t>(i)];
        const Cell& a = dual[i];
        const Cell& b = expected[m];
        if (a.dim != b.dim)
            rep.note("cell " + a.label.to_string() + ": dimension " + std::to_string(a.dim) +
                     " vs " + std::to_string(b.dim));
        if (a.value != b.value)
            rep.note("cell " + a.label.to_string() + ": value " + format_real(a.value) + " vs " +
                     format_real(b.value));
        std::vector<Index> mapped;
        mapped.reserve(a.facets.size());
        for (Index f : a.facets) mapped.push_back(image_of[static_cast<std::size_t>(f)]);
        std::sort(mapped.begin(), mapped.end());
        if (mapped != b.facets)
            rep.note("cell " + a.label.to_string() + ": facet sets differ");
    }
    return rep;
}

}  // namespace cubedual
