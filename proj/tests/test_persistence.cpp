#include <catch2/catch_amalgamated.hpp>

#include <utility>
#include <vector>

#include "cubedual/cubedual.hpp"

using namespace cubedual;

namespace {

GrayscaleImage checkerboard() { return GrayscaleImage({2, 2}, {0, 1, 1, 0}); }

// Two vertices and the edge between them, the edge appearing later.
FilteredComplex path() {
    FilteredComplex cx;
    cx.add_cell(0, 0, {});
    cx.add_cell(0, 0, {});
    cx.add_cell(1, 1, {0, 1});
    return cx;
}

BoundaryMatrix random_strict_ut(SplitMix64& rng, Index n) {
    BoundaryMatrix mat(n);
    for (Index j = 1; j < n; ++j) {
        std::vector<Index> rows;
        for (Index i = 0; i < j; ++i)
            if (rng.chance(0.3)) rows.push_back(i);
        mat.set_column(j, std::move(rows));
    }
    return mat;
}

}  // namespace

TEST_CASE("cells sort by value, then dimension", "[persistence]") {
    const FilteredComplex cx = build_v_complex(checkerboard());
    const Ordering ord = sort_cells(cx);
    CHECK(ord.perm == std::vector<Index>{0, 8, 2, 6, 1, 3, 5, 7, 4});
    CHECK(ord.values == std::vector<Real>{0, 0, 1, 1, 1, 1, 1, 1, 1});
    for (Index pos = 0; pos < ord.size(); ++pos)
        CHECK(ord.rank_of[static_cast<std::size_t>(ord.perm[static_cast<std::size_t>(pos)])] ==
              pos);
}

TEST_CASE("incompatible orderings are rejected", "[persistence]") {
    const FilteredComplex cx = path();
    CHECK_THROWS_AS(make_ordering(cx, {0, 0, 2}), Error);     // not a permutation
    CHECK_THROWS_AS(make_ordering(cx, {2, 0, 1}), Error);     // edge before its endpoints
    CHECK_NOTHROW(make_ordering(cx, {1, 0, 2}));

    FilteredComplex decreasing;
    decreasing.add_cell(0, 1, {});
    decreasing.add_cell(0, 0, {});
    CHECK_THROWS_AS(make_ordering(decreasing, {0, 1}), Error);
    CHECK_NOTHROW(make_ordering(decreasing, {1, 0}));
}

TEST_CASE("path complex by hand", "[persistence]") {
    const FilteredComplex cx = path();
    const Ordering ord = sort_cells(cx);
    const BoundaryMatrix mat = boundary_matrix(cx, ord);

    REQUIRE(mat.size() == 3);
    CHECK(mat.column(0).empty());
    CHECK(mat.column(1).empty());
    CHECK(mat.column(2) == std::vector<Index>{0, 1});

    const PersistencePairing reduced = reduce(mat);
    CHECK(reduced.pairs == std::vector<std::pair<Index, Index>>{{1, 2}});
    CHECK(reduced.essential == std::vector<Index>{0});

    // Corner ranks: the only nonzero column is the last, and it dies once the
    // row range drops below row 1.
    const auto table = corner_rank_table(mat);
    CHECK(table[0][2] == 1);
    CHECK(table[1][2] == 1);
    CHECK(table[2][2] == 0);
    CHECK(table[0][1] == 0);

    // rank(1,2) - rank(1,1) - rank(2,2) + rank(2,1) = 1 picks out the pair.
    CHECK(rank_pairing_oracle(mat) == reduced);
}

TEST_CASE("reduction matches the rank oracle", "[persistence]") {
    SplitMix64 rng(101);
    const std::vector<std::vector<int>> shapes = {{7}, {3, 3}, {2, 2, 2}};
    for (const auto& extents : shapes) {
        for (int trial = 0; trial < 3; ++trial) {
            const GrayscaleImage img = random_image(rng, extents, 0, 4);
            for (bool periodic : {false, true}) {
                for (Construction c : {Construction::V, Construction::T}) {
                    const FilteredComplex cx = c == Construction::V
                                                   ? build_v_complex(img, periodic)
                                                   : build_t_complex(img, periodic);
                    const BoundaryMatrix mat = boundary_matrix(cx, sort_cells(cx));
                    CHECK(reduce(mat) == rank_pairing_oracle(mat, 1000));
                }
            }
        }
    }
}

TEST_CASE("anti-transposition flips across the anti-diagonal", "[persistence]") {
    BoundaryMatrix mat(3);
    mat.set_column(1, {0});
    const BoundaryMatrix flipped = anti_transpose(mat);
    CHECK(flipped.column(0).empty());
    CHECK(flipped.column(1).empty());
    CHECK(flipped.column(2) == std::vector<Index>{1});

    SplitMix64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const BoundaryMatrix m = random_strict_ut(rng, static_cast<Index>(rng.next_in(1, 20)));
        CHECK(anti_transpose(anti_transpose(m)) == m);
    }
}

TEST_CASE("corner ranks survive anti-transposition", "[persistence]") {
    SplitMix64 rng(19);
    for (int trial = 0; trial < 6; ++trial) {
        const Index n1 = static_cast<Index>(rng.next_in(2, 16));
        const BoundaryMatrix mat = random_strict_ut(rng, n1);
        const BoundaryMatrix flipped = anti_transpose(mat);
        const auto lhs = corner_rank_table(mat);
        const auto rhs = corner_rank_table(flipped);
        const Index n = n1 - 1;
        for (Index i = 0; i < n1; ++i)
            for (Index j = 0; j < n1; ++j)
                CHECK(lhs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                      rhs[static_cast<std::size_t>(n - j)][static_cast<std::size_t>(n - i)]);
    }
}

TEST_CASE("diagram does not depend on tie-breaking", "[persistence]") {
    const FilteredComplex cx = build_v_complex(checkerboard());
    const Ordering standard = sort_cells(cx);
    // Same filtration, different choices among equal-value cells.
    const Ordering shuffled = make_ordering(cx, {8, 0, 6, 2, 3, 1, 7, 5, 4});
    const PersistenceDiagram a = diagram(reduce(boundary_matrix(cx, standard)), standard, cx);
    const PersistenceDiagram b = diagram(reduce(boundary_matrix(cx, shuffled)), shuffled, cx);
    CHECK(a == b);
}

TEST_CASE("oracle size guard", "[persistence]") {
    const BoundaryMatrix mat(6);
    CHECK_THROWS_AS(rank_pairing_oracle(mat, 4), GuardError);
    CHECK_NOTHROW(rank_pairing_oracle(mat, 6));
}

TEST_CASE("zero-length pairs stay out of the diagram", "[persistence]") {
    const FilteredComplex cx = build_v_complex(checkerboard());
    const Ordering ord = sort_cells(cx);
    const PersistencePairing pairing = reduce(boundary_matrix(cx, ord));
    CHECK(pairing.pairs.size() == 4);
    CHECK(pairing.essential.size() == 1);

    const PersistenceDiagram dgm = diagram(pairing, ord, cx);
    PersistenceDiagram expected;
    expected.add(0, 0, 1);
    expected.add(0, 0);
    CHECK(dgm == expected);
}

TEST_CASE("diagram bookkeeping", "[persistence]") {
    PersistenceDiagram dgm;
    dgm.add(1, 2, 5);
    dgm.add(0, 1);
    dgm.add(0, 0, 3);
    dgm.add(0, 0, 2);

    const PersistenceDiagram s = dgm.sorted();
    CHECK(s.intervals()[0] == Interval{0, 0, 2});
    CHECK(s.intervals()[1] == Interval{0, 0, 3});
    CHECK(s.intervals()[2] == Interval{0, 1, std::nullopt});
    CHECK(s.intervals()[3] == Interval{1, 2, 5});

    CHECK(dgm.essential_count(0) == 1);
    CHECK(dgm.essential_count(1) == 0);

    PersistenceDiagram other;  // same multiset, other insertion order
    other.add(0, 0, 2);
    other.add(1, 2, 5);
    other.add(0, 0, 3);
    other.add(0, 1);
    CHECK(dgm == other);
    CHECK(diagrams_equal(dgm, other));

    other.add(0, 0, 2);  // multiplicity matters
    CHECK_FALSE(dgm == other);
    CHECK(other.remove_one(Interval{0, 0, 2}));
    CHECK(dgm == other);
    CHECK_FALSE(other.remove_one(Interval{3, 9, std::nullopt}));

    CHECK(interval_less(Interval{0, 0, 5}, Interval{0, 0, std::nullopt}));
    CHECK_FALSE(interval_less(Interval{0, 0, std::nullopt}, Interval{0, 0, 5}));
}
