#pragma once
// Diagram transforms between the two cubical models. Either construction's
// diagram of an image is recovered exactly from the other construction
// applied to the negated padded image:
//
//   1. pick a shell value N strictly above the image maximum,
//   2. run the available engine on negate(pad(img, N)),
//   3. keep every finite interval [p, q) in degree k with p != -N as
//      [-q, -p) in degree d - k - 1,
//   4. add the one essential interval [min(img), inf) in degree 0.
//
// The skipped intervals are exactly the essential class born at -N and the
// finite interval [-N, -min(img)) in degree d - 1 contributed by the shell;
// transform_diagram_theorem_form spells the same identity with an explicit
// removal instead of the skip and is used to cross-check. Outputs do not
// depend on the choice of N.

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "cubedual/cubical.hpp"
#include "cubedual/persistence.hpp"

namespace cubedual {

enum class Construction { V, T };

/// Full pipeline: build, order, reduce, read off the diagram.
inline PersistenceDiagram compute_diagram(const GrayscaleImage& img, Construction construction,
                                          bool periodic = false) {
    const FilteredComplex cx = construction == Construction::V ? build_v_complex(img, periodic)
                                                               : build_t_complex(img, periodic);
    const Ordering ord = sort_cells(cx);
    return diagram(reduce(boundary_matrix(cx, ord)), ord, cx);
}

/// Anything that maps an image to its persistence diagram under a fixed
/// construction; the transforms below are engine-agnostic.
using DiagramEngine = std::function<PersistenceDiagram(const GrayscaleImage&)>;

inline DiagramEngine internal_engine(Construction construction, bool periodic = false) {
    return [construction, periodic](const GrayscaleImage& img) {
        return compute_diagram(img, construction, periodic);
    };
}

/// Default shell value: the image maximum plus max(1, value spread). Any
/// value strictly above the maximum yields the same transform output.
inline Real choose_N(const GrayscaleImage& img) {
    const Real lo = min_value(img);
    const Real hi = max_value(img);
    return hi + std::max(Real(1), hi - lo);
}

namespace detail {

inline PersistenceDiagram dual_construction_diagram(const GrayscaleImage& img,
                                                    const DiagramEngine& engine,
                                                    std::optional<Real> shell) {
    const int d = img.dimension();
    const Real n_value = shell.value_or(choose_N(img));
    if (!(n_value > max_value(img)))
        throw PreconditionError("transform: shell value must exceed the image maximum");

    PersistenceDiagram out;
    out.add(0, min_value(img));
    const PersistenceDiagram negated_diagram = engine(negate(pad(img, n_value)));
    for (const Interval& ivl : negated_diagram.intervals()) {
        if (ivl.birth == negated_value(n_value)) continue;
        if (!ivl.finite())
            throw IntegrityError("transform: essential interval born away from the shell value");
        const int k = d - ivl.dim - 1;
        if (k < 0 || k > d)
            throw IntegrityError("transform: interval degree " + std::to_string(ivl.dim) +
                                 " out of range for dimension " + std::to_string(d));
        out.add(k, negated_value(*ivl.death), negated_value(ivl.birth));
    }
    return out;
}

}  // namespace detail

/// T-construction diagram of `img` from an engine computing V-construction
/// diagrams.
inline PersistenceDiagram t_from_v(const GrayscaleImage& img, const DiagramEngine& v_engine,
                                   std::optional<Real> shell = std::nullopt) {
    return detail::dual_construction_diagram(img, v_engine, shell);
}

/// V-construction diagram of `img` from an engine computing T-construction
/// diagrams.
inline PersistenceDiagram v_from_t(const GrayscaleImage& img, const DiagramEngine& t_engine,
                                   std::optional<Real> shell = std::nullopt) {
    return detail::dual_construction_diagram(img, t_engine, shell);
}

/// The same transform written as the underlying identity: map every finite
/// interval through the degree-flipping dual map, remove one copy of
/// [min_img, n_value) in degree 0, and add [min_img, inf) in degree 0. The
/// removal target must be present; otherwise the input was not the diagram of
/// a negated padded image.
inline PersistenceDiagram transform_diagram_theorem_form(const PersistenceDiagram& dgm, int d,
                                                         Real min_img, Real n_value) {
    PersistenceDiagram out;
    for (const Interval& ivl : dgm.intervals()) {
        if (!ivl.finite()) continue;
        const int k = d - ivl.dim - 1;
        if (k < 0 || k > d)
            throw IntegrityError("transform: interval degree " + std::to_string(ivl.dim) +
                                 " out of range for dimension " + std::to_string(d));
        out.add(k, negated_value(*ivl.death), negated_value(ivl.birth));
    }
    if (!out.remove_one(Interval{0, min_img, n_value}))
        throw IntegrityError("transform: expected interval [" + format_real(min_img) + "," +
                             format_real(n_value) + ") in degree 0 is absent");
    out.add(0, min_img);
    return out;
}

}  // namespace cubedual
