#include <catch2/catch_amalgamated.hpp>

#include <optional>
#include <vector>

#include "cubedual/cubedual.hpp"

using namespace cubedual;

namespace {

GrayscaleImage checkerboard() { return GrayscaleImage({2, 2}, {0, 1, 1, 0}); }

PersistenceDiagram diagram_of(const FilteredComplex& cx) {
    const Ordering ord = sort_cells(cx);
    return diagram(reduce(boundary_matrix(cx, ord)), ord, cx);
}

}  // namespace

TEST_CASE("pairing correspondence on the checkerboard torus", "[duality]") {
    const DualityReport rep = check_dual_pairing(build_v_complex(checkerboard(), true), 2);
    CHECK(rep.pass);
    CHECK(rep.antitranspose_equal);
    CHECK(rep.cells == 16);
    CHECK(rep.pairs_checked == 6);
    CHECK(rep.essential_checked == 4);
    CHECK(rep.mismatches.empty());

    CHECK(check_dual_pairing(build_t_complex(checkerboard(), true), 2).pass);
}

TEST_CASE("pairing correspondence on capped boxes", "[duality]") {
    const Real shell = choose_N(checkerboard());
    const DualityReport t_side = check_dual_pairing(t_construction_with_cap(checkerboard(), shell), 2);
    CHECK(t_side.pass);
    CHECK(t_side.cells == 26);
    CHECK(t_side.essential_checked == 2);

    const DualityReport v_side =
        check_dual_pairing(v_construction_padded_with_cap(checkerboard(), shell), 2);
    CHECK(v_side.pass);
    CHECK(v_side.cells == 50);
    CHECK(v_side.essential_checked == 2);
}

TEST_CASE("pairing correspondence on random closed complexes", "[duality]") {
    SplitMix64 rng(57);
    const std::vector<std::vector<int>> shapes = {{5}, {3, 2}, {2, 2, 2}};
    for (const auto& extents : shapes) {
        for (int trial = 0; trial < 3; ++trial) {
            const GrayscaleImage img = random_image(rng, extents, 0, 4);
            const int d = img.dimension();
            const Real shell = choose_N(img);
            CHECK(check_dual_pairing(build_v_complex(img, true), d).pass);
            CHECK(check_dual_pairing(build_t_complex(img, true), d).pass);
            CHECK(check_dual_pairing(t_construction_with_cap(img, shell), d).pass);
            CHECK(check_dual_pairing(v_construction_padded_with_cap(img, shell), d).pass);
        }
    }
}

TEST_CASE("diagram dual map by hand", "[duality]") {
    PersistenceDiagram dgm;
    dgm.add(0, 1, 3);
    dgm.add(0, 2);
    dgm.add(1, 4, 5);

    const PersistenceDiagram mapped = map_diagram_dual(dgm, 2);
    PersistenceDiagram expected;
    expected.add(1, -3, -1);
    expected.add(2, -2);
    expected.add(0, -5, -4);
    CHECK(mapped == expected);

    CHECK(map_diagram_dual(mapped, 2) == dgm);

    PersistenceDiagram out_of_range;
    out_of_range.add(3, 0, 1);
    CHECK_THROWS_AS(map_diagram_dual(out_of_range, 2), PreconditionError);

    PersistenceDiagram finite_top;
    finite_top.add(2, 0, 1);
    CHECK_THROWS_AS(map_diagram_dual(finite_top, 2), PreconditionError);
    finite_top = PersistenceDiagram();
    finite_top.add(2, 0);
    CHECK_NOTHROW(map_diagram_dual(finite_top, 2));  // essential classes in degree d are fine
}

TEST_CASE("diagram dual map agrees with dualizing the complex", "[duality]") {
    SplitMix64 rng(61);
    for (const auto& extents : std::vector<std::vector<int>>{{4}, {2, 3}}) {
        const GrayscaleImage img = random_image(rng, extents, 0, 5);
        const int d = img.dimension();
        const Real shell = choose_N(img);

        const FilteredComplex torus = build_v_complex(img, true);
        CHECK(map_diagram_dual(diagram_of(torus), d) == diagram_of(dualize(torus, d)));

        const FilteredComplex capped = t_construction_with_cap(img, shell);
        CHECK(map_diagram_dual(diagram_of(capped), d) ==
              diagram_of(v_construction_negated_collapsed(img, shell)));
    }
}

TEST_CASE("dual complexes are shifted twins", "[duality]") {
    SplitMix64 rng(67);
    const std::vector<std::vector<int>> shapes = {{6}, {2, 2}, {3, 2}, {2, 2, 2}};
    for (const auto& extents : shapes) {
        const GrayscaleImage img = random_image(rng, extents, 0, 3);
        const int d = img.dimension();
        const Real shell = choose_N(img);

        const IsomorphismReport capped_t = check_shifted_dual_isomorphism(
            t_construction_with_cap(img, shell), v_construction_negated_collapsed(img, shell), d);
        CHECK(capped_t.pass);

        const IsomorphismReport capped_v = check_shifted_dual_isomorphism(
            v_construction_padded_with_cap(img, shell), t_construction_negated_collapsed(img, shell),
            d);
        CHECK(capped_v.pass);

        std::vector<std::int32_t> modulus;
        for (int e : extents) modulus.push_back(static_cast<std::int32_t>(2 * e));
        const IsomorphismReport tori = check_shifted_dual_isomorphism(
            build_v_complex(img, true), build_t_complex(negate(img), true), d, modulus);
        CHECK(tori.pass);
    }
}

TEST_CASE("shifted comparison notices differences", "[duality]") {
    const GrayscaleImage img = checkerboard();
    const Real shell = choose_N(img);
    // Wrong partner: the two collapsed complexes are not isomorphic to each
    // other's duals under the same shift.
    const IsomorphismReport rep = check_shifted_dual_isomorphism(
        t_construction_with_cap(img, shell), t_construction_negated_collapsed(img, shell), 2);
    CHECK_FALSE(rep.pass);
    CHECK_FALSE(rep.mismatches.empty());
}
