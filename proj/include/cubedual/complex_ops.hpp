#pragma once
// Complex-level modifications: extracting the box boundary, capping it with a
// single top cell, collapsing it to a point, and dualization. All four are
// pure functions returning new complexes.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cubedual/complex.hpp"

namespace cubedual {

namespace detail {

/// Doubled coordinates of every cell, requiring cube labels throughout.
inline std::vector<const CubeKey*> cube_keys(const FilteredComplex& cx, const char* who) {
    std::vector<const CubeKey*> keys;
    keys.reserve(static_cast<std::size_t>(cx.size()));
    for (Index i = 0; i < cx.size(); ++i) {
        const CellLabel& label = cx[i].label;
        if (label.kind != LabelKind::cube)
            throw UnsupportedComplexError(std::string(who) + ": cell " + std::to_string(i) +
                                          " has no cube key");
        keys.push_back(&label.key);
    }
    return keys;
}

}  // namespace detail

/// Indices of the cells on the topological boundary of a box complex: every
/// cell whose key touches coordinate 0 or the axis maximum. Intended for
/// non-periodic complexes straight out of the builders.
inline std::vector<Index> boundary_cells(const FilteredComplex& cx) {
    auto keys = detail::cube_keys(cx, "boundary_cells");
    if (cx.empty()) return {};
    const std::size_t axes = keys[0]->coords.size();
    std::vector<std::int32_t> axis_max(axes, 0);
    for (const CubeKey* key : keys) {
        if (key->coords.size() != axes)
            throw UnsupportedComplexError("boundary_cells: mixed key lengths");
        for (std::size_t a = 0; a < axes; ++a)
            axis_max[a] = std::max(axis_max[a], key->coords[a]);
    }
    std::vector<Index> out;
    for (Index i = 0; i < cx.size(); ++i) {
        const CubeKey& key = *keys[static_cast<std::size_t>(i)];
        for (std::size_t a = 0; a < axes; ++a) {
            if (key.coords[a] == 0 || key.coords[a] == axis_max[a]) {
                out.push_back(i);
                break;
            }
        }
    }
    return out;
}

/// Appends one cell of top dimension whose facets are the (d-1)-cells of the
/// box boundary, turning a box whose boundary is a sphere into a closed
/// space. `value` may not undercut the complex maximum.
inline FilteredComplex attach_top_cell(const FilteredComplex& cx, Real value) {
    const int d = cx.dimension();
    if (d < 1) throw PreconditionError("attach_top_cell: complex dimension must be at least 1");
    if (value < max_value(cx))
        throw PreconditionError("attach_top_cell: value below the complex maximum breaks monotonicity");
    std::vector<Index> facets;
    for (Index i : boundary_cells(cx))
        if (cx[i].dim == d - 1) facets.push_back(i);
    FilteredComplex out = cx;
    out.add_cell(d, value, std::move(facets), CellLabel::cap_cell());
    return out;
}

/// Collapses the entire box boundary to a single vertex. Every boundary cell
/// must already sit at `class_value`, which may not exceed the complex
/// minimum. Chainwise: boundary cells are dropped, one vertex stands for the
/// collapsed boundary, an interior edge keeps that vertex as a facet exactly
/// when an odd number of its endpoints were boundary vertices, and cells of
/// dimension two or more simply lose their boundary facets.
inline FilteredComplex quotient_boundary(const FilteredComplex& cx, Real class_value) {
    const std::vector<Index> boundary = boundary_cells(cx);
    if (!(class_value <= min_value(cx)))
        throw PreconditionError("quotient_boundary: class value above the complex minimum");
    for (Index i : boundary)
        if (cx[i].value != class_value)
            throw PreconditionError("quotient_boundary: boundary cell " + std::to_string(i) +
                                    " has value " + format_real(cx[i].value) + ", expected " +
                                    format_real(class_value));

    std::vector<bool> is_boundary(static_cast<std::size_t>(cx.size()), false);
    for (Index i : boundary) is_boundary[static_cast<std::size_t>(i)] = true;

    const Index class_vertex = 0;
    std::vector<Index> remap(static_cast<std::size_t>(cx.size()), -1);
    Index next = class_vertex + 1;
    for (Index i = 0; i < cx.size(); ++i)
        if (!is_boundary[static_cast<std::size_t>(i)]) remap[static_cast<std::size_t>(i)] = next++;

    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(next));
    cells.push_back(Cell{0, class_value, {}, CellLabel::boundary_class()});
    for (Index i = 0; i < cx.size(); ++i) {
        if (is_boundary[static_cast<std::size_t>(i)]) continue;
        const Cell& c = cx[i];
        std::vector<Index> facets;
        int dropped = 0;
        for (Index f : c.facets) {
            if (is_boundary[static_cast<std::size_t>(f)]) ++dropped;
            else facets.push_back(remap[static_cast<std::size_t>(f)]);
        }
        if (c.dim == 1 && dropped % 2 != 0) facets.push_back(class_vertex);
        cells.push_back(Cell{c.dim, c.value, std::move(facets), c.label});
    }
    return FilteredComplex::from_cells(std::move(cells));
}

/// Combinatorial dual of a closed d-manifold complex: one cell per cell with
/// the dimension flipped to d - dim, facets given by the codimension-1
/// cofaces, value negated, and the label carried over. Requires every
/// (d-1)-cell to have exactly two d-cofaces.
inline FilteredComplex dualize(const FilteredComplex& cx, int d) {
    if (cx.dimension() > d)
        throw PreconditionError("dualize: complex has cells above the stated dimension");
    auto cofaces = cx.coface_lists();
    for (Index i = 0; i < cx.size(); ++i) {
        if (cx[i].dim != d - 1) continue;
        Index top = 0;
        for (Index j : cofaces[static_cast<std::size_t>(i)])
            if (cx[j].dim == d) ++top;
        if (top != 2)
            throw NotClosedManifoldError("dualize: cell " + std::to_string(i) + " has " +
                                         std::to_string(top) + " top cofaces, expected 2");
    }
    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(cx.size()));
    for (Index i = 0; i < cx.size(); ++i)
        cells.push_back(Cell{d - cx[i].dim, negated_value(cx[i].value),
                             std::move(cofaces[static_cast<std::size_t>(i)]), cx[i].label});
    return FilteredComplex::from_cells(std::move(cells));
}

}  // namespace cubedual
