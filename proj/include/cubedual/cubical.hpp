#pragma once
// The two cubical models of a grayscale image.
//
// V-construction: voxels are vertices; every cube takes the maximum of the
// values at its vertices. A d-image with extents n_i yields prod(2n_i - 1)
// cells on the doubled grid {0, ..., 2n_i - 2}.
//
// T-construction: voxels are the top-dimensional cubes; every lower cube
// takes the minimum over the top cubes containing it. The doubled grid is
// {0, ..., 2n_i} with prod(2n_i + 1) cells.
//
// With `periodic` set, opposite sides of the box are glued: coordinates live
// on {0, ..., 2n_i - 1} mod 2n_i, both constructions have prod(2n_i) cells,
// and every axis needs extent at least 2.

#include <utility>
#include <vector>

#include "cubedual/complex.hpp"
#include "cubedual/image.hpp"

namespace cubedual {

namespace detail {

struct DoubledGrid {
    std::vector<std::int32_t> shape;  // coordinate count per axis
    std::vector<Index> strides;       // row-major, last axis fastest
    bool periodic = false;
    Index total = 1;

    DoubledGrid(const GrayscaleImage& img, int extra, bool periodic_)
        : periodic(periodic_) {
        const int d = img.dimension();
        shape.resize(static_cast<std::size_t>(d));
        strides.resize(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) {
            const int n = img.extent(a);
            if (periodic && n < 2)
                throw PreconditionError("periodic construction needs every axis extent >= 2");
            shape[static_cast<std::size_t>(a)] =
                periodic ? 2 * n : 2 * n + static_cast<std::int32_t>(extra);
        }
        for (int a = d - 1; a >= 0; --a) {
            strides[static_cast<std::size_t>(a)] = total;
            total *= shape[static_cast<std::size_t>(a)];
        }
    }

    int axes() const { return static_cast<int>(shape.size()); }

    /// Facet indices of the cell at `flat` with doubled coordinates `coords`:
    /// for every odd coordinate, its two even neighbours (wrapping when
    /// periodic). Every k-cube therefore has exactly 2k facets.
    void append_facets(Index flat, std::span<const std::int32_t> coords,
                       std::vector<Index>& out) const {
        for (int a = 0; a < axes(); ++a) {
            const std::int32_t c = coords[static_cast<std::size_t>(a)];
            if (!(c & 1)) continue;
            const std::int32_t m = shape[static_cast<std::size_t>(a)];
            const Index stride = strides[static_cast<std::size_t>(a)];
            std::int32_t lo = c - 1;
            std::int32_t hi = periodic ? (c + 1) % m : c + 1;
            out.push_back(flat + (lo - c) * stride);
            out.push_back(flat + (hi - c) * stride);
        }
    }

    void advance(std::vector<std::int32_t>& coords) const {
        for (int a = axes() - 1; a >= 0; --a) {
            if (++coords[static_cast<std::size_t>(a)] < shape[static_cast<std::size_t>(a)]) return;
            coords[static_cast<std::size_t>(a)] = 0;
        }
    }
};

}  // namespace detail

/// V-construction of an image. Cells are created in lexicographic order of
/// their doubled coordinates.
inline FilteredComplex build_v_complex(const GrayscaleImage& img, bool periodic = false) {
    const int d = img.dimension();
    detail::DoubledGrid grid(img, -1, periodic);

    std::vector<Index> voxel_strides(static_cast<std::size_t>(d));
    Index vtotal = 1;
    for (int a = d - 1; a >= 0; --a) {
        voxel_strides[static_cast<std::size_t>(a)] = vtotal;
        vtotal *= img.extent(a);
    }

    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(grid.total));
    std::vector<std::int32_t> coords(static_cast<std::size_t>(d), 0);
    std::vector<int> odd_axes;
    std::vector<Index> facets;
    for (Index flat = 0; flat < grid.total; ++flat, grid.advance(coords)) {
        odd_axes.clear();
        Index base_voxel = 0;
        for (int a = 0; a < d; ++a) {
            const std::int32_t c = coords[static_cast<std::size_t>(a)];
            if (c & 1) odd_axes.push_back(a);
            else base_voxel += (c / 2) * voxel_strides[static_cast<std::size_t>(a)];
        }

        // max over the 2^k vertices of the cube
        Real value = 0;
        const int k = static_cast<int>(odd_axes.size());
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            Index voxel = base_voxel;
            for (int b = 0; b < k; ++b) {
                const int a = odd_axes[static_cast<std::size_t>(b)];
                std::int32_t c = coords[static_cast<std::size_t>(a)];
                std::int32_t vertex = (mask >> b) & 1u
                                          ? (periodic ? (c + 1) % grid.shape[static_cast<std::size_t>(a)] : c + 1)
                                          : c - 1;
                voxel += (vertex / 2) * voxel_strides[static_cast<std::size_t>(a)];
            }
            const Real v = img[voxel];
            if (mask == 0 || v > value) value = v;
        }

        facets.clear();
        grid.append_facets(flat, coords, facets);
        cells.push_back(Cell{k, value, facets, CellLabel::cube(CubeKey{coords})});
    }
    return FilteredComplex::from_cells(std::move(cells));
}

/// T-construction of an image, same creation order as build_v_complex.
inline FilteredComplex build_t_complex(const GrayscaleImage& img, bool periodic = false) {
    const int d = img.dimension();
    detail::DoubledGrid grid(img, +1, periodic);

    std::vector<Index> voxel_strides(static_cast<std::size_t>(d));
    Index vtotal = 1;
    for (int a = d - 1; a >= 0; --a) {
        voxel_strides[static_cast<std::size_t>(a)] = vtotal;
        vtotal *= img.extent(a);
    }

    std::vector<Cell> cells;
    cells.reserve(static_cast<std::size_t>(grid.total));
    std::vector<std::int32_t> coords(static_cast<std::size_t>(d), 0);
    // per axis: the odd coordinates of top cubes containing the cell (1 or 2)
    std::vector<std::pair<std::int32_t, std::int32_t>> spans(static_cast<std::size_t>(d));
    std::vector<int> wide_axes;
    std::vector<Index> facets;
    for (Index flat = 0; flat < grid.total; ++flat, grid.advance(coords)) {
        wide_axes.clear();
        Index base_voxel = 0;
        int k = 0;
        for (int a = 0; a < d; ++a) {
            const std::int32_t c = coords[static_cast<std::size_t>(a)];
            const std::int32_t m = grid.shape[static_cast<std::size_t>(a)];
            if (c & 1) {
                ++k;
                base_voxel += (c / 2) * voxel_strides[static_cast<std::size_t>(a)];
            } else if (periodic) {
                spans[static_cast<std::size_t>(a)] = {(c + m - 1) % m, (c + 1) % m};
                wide_axes.push_back(a);
            } else if (c == 0) {
                base_voxel += 0;  // only [0,1] contains it
            } else if (c == m - 1) {
                base_voxel += ((c - 1) / 2) * voxel_strides[static_cast<std::size_t>(a)];
            } else {
                spans[static_cast<std::size_t>(a)] = {c - 1, c + 1};
                wide_axes.push_back(a);
            }
        }

        // min over the top cubes containing the cell
        Real value = 0;
        const int w = static_cast<int>(wide_axes.size());
        for (unsigned mask = 0; mask < (1u << w); ++mask) {
            Index voxel = base_voxel;
            for (int b = 0; b < w; ++b) {
                const int a = wide_axes[static_cast<std::size_t>(b)];
                const auto [lo, hi] = spans[static_cast<std::size_t>(a)];
                const std::int32_t top = (mask >> b) & 1u ? hi : lo;
                voxel += (top / 2) * voxel_strides[static_cast<std::size_t>(a)];
            }
            const Real v = img[voxel];
            if (mask == 0 || v < value) value = v;
        }

        facets.clear();
        grid.append_facets(flat, coords, facets);
        cells.push_back(Cell{k, value, facets, CellLabel::cube(CubeKey{coords})});
    }
    return FilteredComplex::from_cells(std::move(cells));
}

}  // namespace cubedual
