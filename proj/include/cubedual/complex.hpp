#pragma once
// Filtered Z/2 chain complexes: cells carry a dimension, a sorted facet list
// (mod-2 incidences; an incidence of two is represented by absence), a
// filtration value, and a label identifying where the cell came from.

#include <algorithm>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cubedual/common.hpp"
#include "cubedual/cube_key.hpp"

namespace cubedual {

enum class LabelKind : std::uint8_t {
    cube = 0,            // elementary cube with a doubled-coordinate key
    cap_cell = 1,        // top cell closing off a boundary sphere ("kappa")
    boundary_class = 2,  // vertex standing for a collapsed boundary ("boundary-class")
    none = 3,            // hand-built cell without an identity
};

struct CellLabel {
    LabelKind kind = LabelKind::none;
    CubeKey key;  // meaningful for LabelKind::cube only

    static CellLabel cube(CubeKey k) { return {LabelKind::cube, std::move(k)}; }
    static CellLabel cap_cell() { return {LabelKind::cap_cell, {}}; }
    static CellLabel boundary_class() { return {LabelKind::boundary_class, {}}; }

    bool operator==(const CellLabel&) const = default;

    std::string to_string() const {
        switch (kind) {
            case LabelKind::cube: return key.to_string();
            case LabelKind::cap_cell: return "kappa";
            case LabelKind::boundary_class: return "boundary-class";
            default: return "-";
        }
    }
};

struct Cell {
    int dim = 0;
    Real value = 0;
    std::vector<Index> facets;  // sorted ascending
    CellLabel label;
};

namespace detail {

/// Mod-2 sum of two sorted index lists.
inline std::vector<Index> symmetric_difference(std::span<const Index> a, std::span<const Index> b) {
    std::vector<Index> out;
    out.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) out.push_back(a[i++]);
        else if (b[j] < a[i]) out.push_back(b[j++]);
        else { ++i; ++j; }
    }
    out.insert(out.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
    out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
    return out;
}

}  // namespace detail

/// Cells in creation order. Facet indices always point at earlier cells;
/// everything else (dimension bookkeeping, monotonicity, boundary-of-boundary)
/// is reported by validate() rather than enforced on construction, so that
/// deliberately broken complexes can be built and examined.
class FilteredComplex {
public:
    Index add_cell(int dim, Real value, std::vector<Index> facets, CellLabel label = {}) {
        if (dim < 0) throw Error("add_cell: negative dimension");
        std::sort(facets.begin(), facets.end());
        for (Index f : facets)
            if (f < 0 || f >= size()) throw Error("add_cell: facet index out of range");
        top_dim_ = std::max(top_dim_, dim);
        cells_.push_back(Cell{dim, value, std::move(facets), std::move(label)});
        return size() - 1;
    }

    /// Builds a complex from a full cell vector at once, allowing facet
    /// indices to point anywhere inside the vector (dualization reverses the
    /// face relation, so downward references are not enough there).
    static FilteredComplex from_cells(std::vector<Cell> cells) {
        FilteredComplex cx;
        const Index total = static_cast<Index>(cells.size());
        for (Cell& c : cells) {
            if (c.dim < 0) throw Error("from_cells: negative dimension");
            std::sort(c.facets.begin(), c.facets.end());
            for (Index f : c.facets)
                if (f < 0 || f >= total) throw Error("from_cells: facet index out of range");
            cx.top_dim_ = std::max(cx.top_dim_, c.dim);
        }
        cx.cells_ = std::move(cells);
        return cx;
    }

    Index size() const { return static_cast<Index>(cells_.size()); }
    bool empty() const { return cells_.empty(); }

    /// Largest cell dimension present; -1 for the empty complex.
    int dimension() const { return top_dim_; }

    const Cell& operator[](Index i) const { return cells_[static_cast<std::size_t>(i)]; }
    const std::vector<Cell>& cells() const { return cells_; }

    /// For every cell, the indices of the cells having it as a facet.
    std::vector<std::vector<Index>> coface_lists() const {
        std::vector<std::vector<Index>> cofaces(cells_.size());
        for (Index i = 0; i < size(); ++i)
            for (Index f : cells_[static_cast<std::size_t>(i)].facets)
                cofaces[static_cast<std::size_t>(f)].push_back(i);
        return cofaces;  // ascending by construction
    }

    /// Structural violations as human-readable strings naming cell indices;
    /// empty means the complex is a valid monotone mod-2 chain complex.
    std::vector<std::string> validate() const {
        std::vector<std::string> out;
        for (Index i = 0; i < size(); ++i) {
            const Cell& c = cells_[static_cast<std::size_t>(i)];
            for (std::size_t k = 0; k < c.facets.size(); ++k) {
                Index f = c.facets[k];
                const Cell& fc = cells_[static_cast<std::size_t>(f)];
                if (k > 0 && c.facets[k - 1] == f)
                    out.push_back("cell " + std::to_string(i) + ": duplicate facet " + std::to_string(f));
                if (fc.dim != c.dim - 1)
                    out.push_back("cell " + std::to_string(i) + ": facet " + std::to_string(f) +
                                  " has dimension " + std::to_string(fc.dim) + ", expected " +
                                  std::to_string(c.dim - 1));
                if (fc.value > c.value)
                    out.push_back("cell " + std::to_string(i) + ": value " + format_real(c.value) +
                                  " below facet " + std::to_string(f) + " value " + format_real(fc.value));
            }
            // boundary of boundary, mod 2
            std::vector<Index> second;
            for (Index f : c.facets)
                second.insert(second.end(), cells_[static_cast<std::size_t>(f)].facets.begin(),
                              cells_[static_cast<std::size_t>(f)].facets.end());
            std::sort(second.begin(), second.end());
            for (std::size_t k = 0; k < second.size();) {
                std::size_t run = k;
                while (run < second.size() && second[run] == second[k]) ++run;
                if ((run - k) % 2 != 0)
                    out.push_back("cell " + std::to_string(i) + ": boundary of boundary contains cell " +
                                  std::to_string(second[k]));
                k = run;
            }
        }
        return out;
    }

    /// One line per cell: "idx dim value facet-idx-list label". Debugging aid,
    /// not a stability-guaranteed format.
    void write_debug(std::ostream& out) const {
        for (Index i = 0; i < size(); ++i) {
            const Cell& c = cells_[static_cast<std::size_t>(i)];
            out << i << ' ' << c.dim << ' ' << format_real(c.value) << ' ';
            if (c.facets.empty()) {
                out << '-';
            } else {
                for (std::size_t k = 0; k < c.facets.size(); ++k)
                    out << (k ? "," : "") << c.facets[k];
            }
            out << ' ' << c.label.to_string() << '\n';
        }
    }

private:
    std::vector<Cell> cells_;
    int top_dim_ = -1;
};

inline Real min_value(const FilteredComplex& cx) {
    if (cx.empty()) throw PreconditionError("min_value: empty complex");
    Real m = cx[0].value;
    for (const Cell& c : cx.cells()) m = std::min(m, c.value);
    return m;
}

inline Real max_value(const FilteredComplex& cx) {
    if (cx.empty()) throw PreconditionError("max_value: empty complex");
    Real m = cx[0].value;
    for (const Cell& c : cx.cells()) m = std::max(m, c.value);
    return m;
}

/// Alternating cell count; equals the Euler characteristic of the underlying
/// space for a valid complex.
inline Index euler_characteristic(const FilteredComplex& cx) {
    Index chi = 0;
    for (const Cell& c : cx.cells()) chi += (c.dim % 2 == 0) ? 1 : -1;
    return chi;
}

}  // namespace cubedual
