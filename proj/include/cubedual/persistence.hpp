#pragma once
// Persistence of a filtered complex over Z/2: compatible cell orderings, the
// total boundary matrix, column-reduction pairing, a brute-force pairing
// oracle built purely from corner-submatrix ranks, and persistence diagrams.

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "cubedual/complex.hpp"

namespace cubedual {

/// A linear order on the cells that refines the filtration: values are
/// non-decreasing along the order and every facet precedes its cofaces.
struct Ordering {
    std::vector<Index> perm;     // perm[pos] = cell index
    std::vector<Index> rank_of;  // inverse of perm
    std::vector<Real> values;    // filtration value by position

    Index size() const { return static_cast<Index>(perm.size()); }
};

/// Wraps an explicit permutation into an Ordering, verifying both
/// compatibility conditions.
inline Ordering make_ordering(const FilteredComplex& cx, std::vector<Index> perm) {
    const Index n1 = cx.size();
    if (static_cast<Index>(perm.size()) != n1) throw Error("make_ordering: permutation size mismatch");
    Ordering ord;
    ord.perm = std::move(perm);
    ord.rank_of.assign(static_cast<std::size_t>(n1), -1);
    ord.values.resize(static_cast<std::size_t>(n1));
    for (Index pos = 0; pos < n1; ++pos) {
        const Index cell = ord.perm[static_cast<std::size_t>(pos)];
        if (cell < 0 || cell >= n1 || ord.rank_of[static_cast<std::size_t>(cell)] != -1)
            throw Error("make_ordering: not a permutation");
        ord.rank_of[static_cast<std::size_t>(cell)] = pos;
        ord.values[static_cast<std::size_t>(pos)] = cx[cell].value;
        if (pos > 0 && ord.values[static_cast<std::size_t>(pos - 1)] > ord.values[static_cast<std::size_t>(pos)])
            throw Error("make_ordering: values decrease at position " + std::to_string(pos));
    }
    for (Index cell = 0; cell < n1; ++cell)
        for (Index f : cx[cell].facets)
            if (ord.rank_of[static_cast<std::size_t>(f)] >= ord.rank_of[static_cast<std::size_t>(cell)])
                throw Error("make_ordering: facet " + std::to_string(f) + " does not precede cell " +
                            std::to_string(cell));
    return ord;
}

/// Deterministic compatible ordering: sort by (value, dimension, label), with
/// cube keys compared lexicographically and symbolic cells after all cubes of
/// the same value and dimension.
inline Ordering sort_cells(const FilteredComplex& cx) {
    std::vector<Index> perm(static_cast<std::size_t>(cx.size()));
    std::iota(perm.begin(), perm.end(), Index(0));
    std::sort(perm.begin(), perm.end(), [&cx](Index a, Index b) {
        const Cell& ca = cx[a];
        const Cell& cb = cx[b];
        if (ca.value != cb.value) return ca.value < cb.value;
        if (ca.dim != cb.dim) return ca.dim < cb.dim;
        if (ca.label.kind != cb.label.kind) return ca.label.kind < cb.label.kind;
        if (ca.label.kind == LabelKind::cube && ca.label.key != cb.label.key)
            return ca.label.key < cb.label.key;
        return a < b;
    });
    return make_ordering(cx, std::move(perm));
}

/// Total boundary matrix over Z/2 in a given ordering: column j lists the
/// positions of the facets of the j-th cell. Strictly upper triangular.
class BoundaryMatrix {
public:
    explicit BoundaryMatrix(Index size) : cols_(static_cast<std::size_t>(size)) {}

    Index size() const { return static_cast<Index>(cols_.size()); }

    const std::vector<Index>& column(Index j) const { return cols_[static_cast<std::size_t>(j)]; }

    /// Rows must be sorted, duplicate-free, and strictly above the diagonal.
    void set_column(Index j, std::vector<Index> rows) {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (rows[k] < 0 || rows[k] >= j)
                throw Error("set_column: entry at or below the diagonal");
            if (k > 0 && rows[k - 1] >= rows[k]) throw Error("set_column: rows not strictly sorted");
        }
        cols_[static_cast<std::size_t>(j)] = std::move(rows);
    }

    bool operator==(const BoundaryMatrix&) const = default;

private:
    std::vector<std::vector<Index>> cols_;
};

inline BoundaryMatrix boundary_matrix(const FilteredComplex& cx, const Ordering& ord) {
    BoundaryMatrix mat(ord.size());
    std::vector<Index> rows;
    for (Index j = 0; j < ord.size(); ++j) {
        rows.clear();
        for (Index f : cx[ord.perm[static_cast<std::size_t>(j)]].facets)
            rows.push_back(ord.rank_of[static_cast<std::size_t>(f)]);
        std::sort(rows.begin(), rows.end());
        mat.set_column(j, rows);
    }
    return mat;
}

/// The anti-transpose: entry (i, j) moves to (n - j, n - i), flipping the
/// matrix across the anti-diagonal. An involution that preserves strict
/// upper-triangularity.
inline BoundaryMatrix anti_transpose(const BoundaryMatrix& mat) {
    const Index n = mat.size() - 1;
    std::vector<std::vector<Index>> cols(static_cast<std::size_t>(mat.size()));
    for (Index j = 0; j <= n; ++j)
        for (Index i : mat.column(j)) cols[static_cast<std::size_t>(n - i)].push_back(n - j);
    BoundaryMatrix out(mat.size());
    for (Index j = 0; j <= n; ++j) {
        std::sort(cols[static_cast<std::size_t>(j)].begin(), cols[static_cast<std::size_t>(j)].end());
        out.set_column(j, std::move(cols[static_cast<std::size_t>(j)]));
    }
    return out;
}

/// Result of a pairing computation, in ordering positions. Pairs with equal
/// filtration values are kept; dropping them is the diagram's business.
struct PersistencePairing {
    std::vector<std::pair<Index, Index>> pairs;  // (birth position, death position)
    std::vector<Index> essential;                // unpaired positions, ascending

    bool operator==(const PersistencePairing&) const = default;
};

namespace detail {

inline PersistencePairing finish_pairing(std::vector<std::pair<Index, Index>> pairs, Index n1) {
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> taken(static_cast<std::size_t>(n1), false);
    for (auto [i, j] : pairs) {
        taken[static_cast<std::size_t>(i)] = true;
        taken[static_cast<std::size_t>(j)] = true;
    }
    PersistencePairing out;
    out.pairs = std::move(pairs);
    for (Index i = 0; i < n1; ++i)
        if (!taken[static_cast<std::size_t>(i)]) out.essential.push_back(i);
    return out;
}

}  // namespace detail

/// Standard left-to-right column reduction: repeatedly add the earlier
/// reduced column sharing the current lowest entry until the column vanishes
/// (a birth) or claims a fresh pivot, pairing pivot row with column.
inline PersistencePairing reduce(const BoundaryMatrix& mat) {
    const Index n1 = mat.size();
    std::vector<Index> owner(static_cast<std::size_t>(n1), -1);  // pivot row -> column
    std::vector<std::vector<Index>> reduced(static_cast<std::size_t>(n1));
    std::vector<std::pair<Index, Index>> pairs;
    for (Index j = 0; j < n1; ++j) {
        std::vector<Index> col = mat.column(j);
        while (!col.empty()) {
            const Index low = col.back();
            const Index k = owner[static_cast<std::size_t>(low)];
            if (k < 0) break;
            col = detail::symmetric_difference(col, reduced[static_cast<std::size_t>(k)]);
        }
        if (!col.empty()) {
            const Index low = col.back();
            owner[static_cast<std::size_t>(low)] = j;
            reduced[static_cast<std::size_t>(j)] = std::move(col);
            pairs.emplace_back(low, j);
        }
    }
    return detail::finish_pairing(std::move(pairs), n1);
}

/// Cap on the brute-force oracle, overridable through the CUBEDUAL_ORACLE_MAX
/// environment variable.
inline Index oracle_size_guard() {
    if (const char* s = std::getenv("CUBEDUAL_ORACLE_MAX")) {
        long long v = 0;
        if (parse_integer(s, v) && v > 0) return static_cast<Index>(v);
    }
    return 512;
}

/// Z/2 rank of every lower-left corner submatrix: table[i][j] is the rank of
/// rows i..n of columns 0..j. One dense-bitset Gaussian elimination sweep per
/// starting row i, inserting columns left to right and recording the running
/// rank after each.
inline std::vector<std::vector<std::int32_t>> corner_rank_table(const BoundaryMatrix& mat) {
    const Index n1 = mat.size();
    const std::size_t words = (static_cast<std::size_t>(n1) + 63) / 64;
    std::vector<std::vector<std::int32_t>> table(
        static_cast<std::size_t>(n1), std::vector<std::int32_t>(static_cast<std::size_t>(n1), 0));

    auto highest_bit = [words](const std::vector<std::uint64_t>& bits) -> Index {
        for (std::size_t w = words; w-- > 0;)
            if (bits[w]) return static_cast<Index>(w * 64 + 63 - static_cast<std::size_t>(std::countl_zero(bits[w])));
        return -1;
    };

    std::vector<std::vector<std::uint64_t>> basis(static_cast<std::size_t>(n1));
    std::vector<std::uint64_t> tmp(words);
    for (Index i = 0; i < n1; ++i) {
        for (auto& b : basis) b.clear();
        std::int32_t rank = 0;
        for (Index j = 0; j < n1; ++j) {
            std::fill(tmp.begin(), tmp.end(), 0);
            for (Index r : mat.column(j))
                if (r >= i) tmp[static_cast<std::size_t>(r) / 64] |= std::uint64_t(1) << (static_cast<std::size_t>(r) % 64);
            Index p;
            while ((p = highest_bit(tmp)) >= 0) {
                auto& b = basis[static_cast<std::size_t>(p)];
                if (b.empty()) {
                    b = tmp;
                    ++rank;
                    break;
                }
                for (std::size_t w = 0; w < words; ++w) tmp[w] ^= b[w];
            }
            table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = rank;
        }
    }
    return table;
}

/// Pairing computed from corner ranks alone: position pair (i, j) belongs to
/// the pairing exactly when
///     rank(i, j) - rank(i, j-1) - rank(i+1, j) + rank(i+1, j-1) == 1,
/// where rank(i, j) is the rank of rows i..n of columns 0..j, an empty row or
/// column range contributing 0. Quartic-time; guarded by `max_cells`.
inline PersistencePairing rank_pairing_oracle(const BoundaryMatrix& mat,
                                              std::optional<Index> max_cells = std::nullopt) {
    const Index limit = max_cells.value_or(oracle_size_guard());
    const Index n1 = mat.size();
    if (n1 > limit)
        throw GuardError("rank_pairing_oracle: " + std::to_string(n1) + " cells exceed the guard of " +
                         std::to_string(limit));
    const auto table = corner_rank_table(mat);
    auto rank = [&](Index i, Index j) -> std::int32_t {
        if (i >= n1 || j < 0) return 0;
        return table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    };
    std::vector<std::pair<Index, Index>> pairs;
    for (Index i = 0; i < n1; ++i)
        for (Index j = i + 1; j < n1; ++j)
            if (rank(i, j) - rank(i, j - 1) - rank(i + 1, j) + rank(i + 1, j - 1) == 1)
                pairs.emplace_back(i, j);
    return detail::finish_pairing(std::move(pairs), n1);
}

/// One interval of a persistence diagram; death is absent for essential
/// classes.
struct Interval {
    int dim = 0;
    Real birth = 0;
    std::optional<Real> death;

    bool finite() const { return death.has_value(); }
    bool operator==(const Interval&) const = default;
};

inline bool interval_less(const Interval& a, const Interval& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.birth != b.birth) return a.birth < b.birth;
    if (a.finite() != b.finite()) return a.finite();  // finite deaths before infinity
    if (a.finite() && *a.death != *b.death) return *a.death < *b.death;
    return false;
}

class PersistenceDiagram {
public:
    PersistenceDiagram() = default;
    explicit PersistenceDiagram(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {}

    void add(int dim, Real birth, std::optional<Real> death = std::nullopt) {
        intervals_.push_back(Interval{dim, birth, death});
    }
    void add(Interval ivl) { intervals_.push_back(ivl); }

    /// Removes one exact copy of the interval; false when absent.
    bool remove_one(const Interval& ivl) {
        auto it = std::find(intervals_.begin(), intervals_.end(), ivl);
        if (it == intervals_.end()) return false;
        intervals_.erase(it);
        return true;
    }

    const std::vector<Interval>& intervals() const { return intervals_; }
    Index size() const { return static_cast<Index>(intervals_.size()); }

    PersistenceDiagram sorted() const {
        PersistenceDiagram out(*this);
        std::sort(out.intervals_.begin(), out.intervals_.end(), interval_less);
        return out;
    }

    Index essential_count(int dim) const {
        Index n = 0;
        for (const Interval& ivl : intervals_)
            if (!ivl.finite() && ivl.dim == dim) ++n;
        return n;
    }

    /// Multiset equality.
    bool operator==(const PersistenceDiagram& other) const {
        return sorted().intervals_ == other.sorted().intervals_;
    }

private:
    std::vector<Interval> intervals_;
};

inline bool diagrams_equal(const PersistenceDiagram& a, const PersistenceDiagram& b) {
    return a == b;
}

/// Reads the diagram off a pairing: finite intervals from pairs of distinct
/// values (equal-value pairs vanish), essential intervals from unpaired
/// positions. Degrees come from the cells behind the positions.
inline PersistenceDiagram diagram(const PersistencePairing& pairing, const Ordering& ord,
                                  const FilteredComplex& cx) {
    PersistenceDiagram out;
    for (auto [i, j] : pairing.pairs) {
        const Real birth = ord.values[static_cast<std::size_t>(i)];
        const Real death = ord.values[static_cast<std::size_t>(j)];
        if (birth < death) out.add(cx[ord.perm[static_cast<std::size_t>(i)]].dim, birth, death);
    }
    for (Index i : pairing.essential)
        out.add(cx[ord.perm[static_cast<std::size_t>(i)]].dim, ord.values[static_cast<std::size_t>(i)]);
    return out;
}

}  // namespace cubedual
