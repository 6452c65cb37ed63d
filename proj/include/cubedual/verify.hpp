#pragma once
// Self-verification: every check in this header is a provable identity about
// the constructions, so a failure always means an implementation bug (or a
// deliberately injected fault). The CLI `verify` command and the acceptance
// suite both run these.

#include <string>
#include <vector>

#include "cubedual/duality.hpp"
#include "cubedual/random.hpp"
#include "cubedual/transform.hpp"

namespace cubedual {

struct CheckOutcome {
    std::string name;
    bool pass = true;
    bool skipped = false;
    std::string detail;
};

namespace checks {

namespace detail {

inline CheckOutcome fail(std::string name, std::string why) {
    return CheckOutcome{std::move(name), false, false, std::move(why)};
}

inline CheckOutcome guarded(std::string name, const std::function<CheckOutcome()>& body) {
    try {
        return body();
    } catch (const Error& e) {
        return fail(std::move(name), e.what());
    }
}

inline std::string first_mismatch(const DualityReport& rep) {
    return rep.mismatches.empty() ? std::string("mismatch") : rep.mismatches.front();
}

}  // namespace detail

/// reduce() and the corner-rank oracle agree on both constructions.
/// Complexes above `oracle_limit` cells are skipped rather than failed. With
/// `inject_fault` set, one matrix bit is flipped first; the check is then
/// expected to fail, which exercises the failure path end to end.
inline CheckOutcome oracle_equivalence(const GrayscaleImage& img, Index oracle_limit,
                                       bool inject_fault = false) {
    const std::string name = "oracle-equivalence";
    return detail::guarded(name, [&]() -> CheckOutcome {
        std::string note;
        for (Construction c : {Construction::V, Construction::T}) {
            const FilteredComplex cx =
                c == Construction::V ? build_v_complex(img) : build_t_complex(img);
            if (cx.size() > oracle_limit) {
                note += std::string(note.empty() ? "" : ", ") +
                        (c == Construction::V ? "V" : "T") + " skipped (size guard)";
                continue;
            }
            const Ordering ord = sort_cells(cx);
            BoundaryMatrix mat = boundary_matrix(cx, ord);
            const PersistencePairing expected = rank_pairing_oracle(mat, oracle_limit);
            if (inject_fault) {
                // Drop the pivot of the first nonempty column. That column is
                // already reduced (nothing sits left of it), so its pair is
                // guaranteed to move or vanish.
                for (Index j = 0; j < mat.size(); ++j) {
                    if (mat.column(j).empty()) continue;
                    std::vector<Index> rows = mat.column(j);
                    rows.pop_back();
                    mat.set_column(j, std::move(rows));
                    break;
                }
            }
            if (!(reduce(mat) == expected))
                return detail::fail(name, std::string(c == Construction::V ? "V" : "T") +
                                              ": reduction pairing differs from the rank oracle");
        }
        return CheckOutcome{name, true, false, note.empty() ? "reduce == rank oracle" : note};
    });
}

/// Pairing correspondence under dualization for the periodic constructions.
inline CheckOutcome dual_pairing_torus(const GrayscaleImage& img) {
    const std::string name = "dual-pairing-torus";
    for (int e : img.extents())
        if (e < 2) return CheckOutcome{name, true, true, "needs every axis extent >= 2"};
    return detail::guarded(name, [&]() -> CheckOutcome {
        const int d = img.dimension();
        for (Construction c : {Construction::V, Construction::T}) {
            const FilteredComplex cx =
                c == Construction::V ? build_v_complex(img, true) : build_t_complex(img, true);
            const DualityReport rep = check_dual_pairing(cx, d);
            if (!rep.pass) return detail::fail(name, detail::first_mismatch(rep));
        }
        return CheckOutcome{name, true, false, "pairs and essentials correspond"};
    });
}

/// Pairing correspondence under dualization for both capped sphere complexes.
inline CheckOutcome dual_pairing_sphere(const GrayscaleImage& img) {
    const std::string name = "dual-pairing-sphere";
    return detail::guarded(name, [&]() -> CheckOutcome {
        const int d = img.dimension();
        const Real shell = choose_N(img);
        for (bool t_side : {true, false}) {
            const FilteredComplex cx = t_side ? t_construction_with_cap(img, shell)
                                              : v_construction_padded_with_cap(img, shell);
            const DualityReport rep = check_dual_pairing(cx, d);
            if (!rep.pass) return detail::fail(name, detail::first_mismatch(rep));
        }
        return CheckOutcome{name, true, false, "pairs and essentials correspond"};
    });
}

/// The explicit cell-level isomorphisms behind the transforms: dualizing a
/// capped complex gives the collapsed complex of the negated padded image
/// (keys shifted by one), and dualizing a periodic V-complex gives the
/// periodic T-complex of the negated image.
inline CheckOutcome dual_complex_pairs(const GrayscaleImage& img) {
    const std::string name = "dual-complex-pairs";
    return detail::guarded(name, [&]() -> CheckOutcome {
        const int d = img.dimension();
        const Real shell = choose_N(img);
        {
            const IsomorphismReport rep = check_shifted_dual_isomorphism(
                t_construction_with_cap(img, shell), v_construction_negated_collapsed(img, shell), d);
            if (!rep.pass)
                return detail::fail(name, "capped T vs collapsed V: " + rep.mismatches.front());
        }
        {
            const IsomorphismReport rep = check_shifted_dual_isomorphism(
                v_construction_padded_with_cap(img, shell), t_construction_negated_collapsed(img, shell),
                d);
            if (!rep.pass)
                return detail::fail(name, "capped padded V vs collapsed T: " + rep.mismatches.front());
        }
        bool torus = true;
        for (int e : img.extents()) torus = torus && e >= 2;
        if (torus) {
            std::vector<std::int32_t> modulus;
            for (int e : img.extents()) modulus.push_back(static_cast<std::int32_t>(2 * e));
            const IsomorphismReport rep = check_shifted_dual_isomorphism(
                build_v_complex(img, true), build_t_complex(negate(img), true), d, modulus);
            if (!rep.pass)
                return detail::fail(name, "periodic V vs periodic T: " + rep.mismatches.front());
        }
        return CheckOutcome{name, true, false, torus ? "3 dual pairs match" : "2 dual pairs match"};
    });
}

/// Diagram-level dual map agrees with actually dualizing, and is an
/// involution.
inline CheckOutcome dual_diagram_map(const GrayscaleImage& img) {
    const std::string name = "dual-diagram-map";
    return detail::guarded(name, [&]() -> CheckOutcome {
        const int d = img.dimension();
        const Real shell = choose_N(img);
        auto dgm_of = [](const FilteredComplex& cx) {
            const Ordering ord = sort_cells(cx);
            return diagram(reduce(boundary_matrix(cx, ord)), ord, cx);
        };
        const std::pair<FilteredComplex, FilteredComplex> duals[] = {
            {t_construction_with_cap(img, shell), v_construction_negated_collapsed(img, shell)},
            {v_construction_padded_with_cap(img, shell), t_construction_negated_collapsed(img, shell)},
        };
        for (const auto& [a, b] : duals) {
            const PersistenceDiagram da = dgm_of(a);
            const PersistenceDiagram db = dgm_of(b);
            if (!(map_diagram_dual(da, d) == db))
                return detail::fail(name, "mapped diagram differs from the dual complex diagram");
            if (!(map_diagram_dual(map_diagram_dual(da, d), d) == da))
                return detail::fail(name, "dual map is not an involution");
        }
        return CheckOutcome{name, true, false, "diagram map matches dualization"};
    });
}

/// Padding with a shell strictly above the maximum leaves diagrams untouched.
inline CheckOutcome padding_invariance(const GrayscaleImage& img) {
    const std::string name = "padding-invariance";
    return detail::guarded(name, [&]() -> CheckOutcome {
        const GrayscaleImage padded = pad(img, choose_N(img));
        for (Construction c : {Construction::V, Construction::T})
            if (!(compute_diagram(padded, c) == compute_diagram(img, c)))
                return detail::fail(name, std::string(c == Construction::V ? "V" : "T") +
                                              ": padding changed the diagram");
        return CheckOutcome{name, true, false, "diagrams invariant under padding"};
    });
}

/// Capping the boundary sphere adds exactly one essential interval in the top
/// degree, born at the cap value, and changes nothing else.
inline CheckOutcome cap_attachment(const GrayscaleImage& img) {
    const std::string name = "cap-attachment";
    return detail::guarded(name, [&]() -> CheckOutcome {
        const int d = img.dimension();
        const Real shell = choose_N(img);
        const std::pair<FilteredComplex, FilteredComplex> cases[] = {
            {build_t_complex(img), t_construction_with_cap(img, shell)},
            {build_v_complex(pad(img, shell)), v_construction_padded_with_cap(img, shell)},
        };
        auto dgm_of = [](const FilteredComplex& cx) {
            const Ordering ord = sort_cells(cx);
            return diagram(reduce(boundary_matrix(cx, ord)), ord, cx);
        };
        for (const auto& [base, capped] : cases) {
            PersistenceDiagram expected = dgm_of(base);
            expected.add(d, shell);
            if (!(dgm_of(capped) == expected))
                return detail::fail(name, "cap changed more than the one top-degree class");
            if (euler_characteristic(capped) - euler_characteristic(base) != (d % 2 == 0 ? 1 : -1))
                return detail::fail(name, "Euler characteristic off after capping");
        }
        return CheckOutcome{name, true, false, "cap adds exactly one class"};
    });
}

/// Collapsing the shell of the negated padded image trades the finite
/// interval [-N, -min) in degree d-1 for an essential class in degree d.
inline CheckOutcome quotient_diagram(const GrayscaleImage& img) {
    const std::string name = "quotient-diagram";
    return detail::guarded(name, [&]() -> CheckOutcome {
        const int d = img.dimension();
        const Real shell = choose_N(img);
        const GrayscaleImage negated = negate(pad(img, shell));
        auto dgm_of = [](const FilteredComplex& cx) {
            const Ordering ord = sort_cells(cx);
            return diagram(reduce(boundary_matrix(cx, ord)), ord, cx);
        };
        for (Construction c : {Construction::V, Construction::T}) {
            const FilteredComplex base =
                c == Construction::V ? build_v_complex(negated) : build_t_complex(negated);
            const FilteredComplex collapsed = quotient_boundary(base, negated_value(shell));
            PersistenceDiagram expected = dgm_of(base);
            if (!expected.remove_one(Interval{d - 1, negated_value(shell), negated_value(min_value(img))}))
                return detail::fail(name, "shell interval missing from the uncollapsed diagram");
            expected.add(d, negated_value(min_value(img)));
            if (!(dgm_of(collapsed) == expected))
                return detail::fail(name, std::string(c == Construction::V ? "V" : "T") +
                                              ": collapsed diagram mismatch");
            Index chi_boundary = 0;
            for (Index i : boundary_cells(base)) chi_boundary += base[i].dim % 2 == 0 ? 1 : -1;
            if (euler_characteristic(collapsed) !=
                euler_characteristic(base) - chi_boundary + 1)
                return detail::fail(name, "Euler characteristic off after collapsing");
        }
        return CheckOutcome{name, true, false, "collapse trades the shell class as expected"};
    });
}

/// End-to-end transform identities: each construction's diagram derived
/// through the other construction matches the direct computation, the
/// explicit-removal form agrees, the only intervals born at the shell value
/// are the two contributed by the shell itself, and the output is invariant
/// under the choice of shell value.
inline CheckOutcome construction_transforms(const GrayscaleImage& img) {
    const std::string name = "construction-transforms";
    return detail::guarded(name, [&]() -> CheckOutcome {
        const int d = img.dimension();
        const PersistenceDiagram direct_v = compute_diagram(img, Construction::V);
        const PersistenceDiagram direct_t = compute_diagram(img, Construction::T);
        if (!(t_from_v(img, internal_engine(Construction::V)) == direct_t))
            return detail::fail(name, "T diagram via V engine differs from direct T");
        if (!(v_from_t(img, internal_engine(Construction::T)) == direct_v))
            return detail::fail(name, "V diagram via T engine differs from direct V");

        const Real shell = choose_N(img);
        const GrayscaleImage negated = negate(pad(img, shell));
        for (Construction c : {Construction::V, Construction::T}) {
            const PersistenceDiagram inner = compute_diagram(negated, c);
            Index essentials = 0, shell_finite = 0;
            for (const Interval& ivl : inner.intervals()) {
                if (!ivl.finite()) {
                    ++essentials;
                    if (ivl.dim != 0 || ivl.birth != negated_value(shell))
                        return detail::fail(name, "unexpected essential class in the negated image");
                } else if (ivl.birth == negated_value(shell)) {
                    ++shell_finite;
                    if (ivl.dim != d - 1 || *ivl.death != negated_value(min_value(img)))
                        return detail::fail(name, "unexpected finite interval born at the shell value");
                }
            }
            if (essentials != 1 || shell_finite != 1)
                return detail::fail(name, "shell contributes other than two intervals");
            const PersistenceDiagram& target = c == Construction::V ? direct_t : direct_v;
            if (!(transform_diagram_theorem_form(inner, d, min_value(img), shell) == target))
                return detail::fail(name, "explicit-removal form disagrees with the direct diagram");
        }

        const Real other_shell = max_value(img) + 1048576.0;
        if (!(t_from_v(img, internal_engine(Construction::V), max_value(img) + 1) ==
              t_from_v(img, internal_engine(Construction::V), other_shell)))
            return detail::fail(name, "output depends on the shell value");
        return CheckOutcome{name, true, false, "transforms match direct computation"};
    });
}

/// Structural invariants of the builders: valid monotone complexes, the exact
/// cell counts, 2k facets per k-cube, and the right essential classes (one
/// degree-0 class for a box, binomial counts for a torus).
inline CheckOutcome complex_invariants(const GrayscaleImage& img) {
    const std::string name = "complex-invariants";
    return detail::guarded(name, [&]() -> CheckOutcome {
        const int d = img.dimension();
        bool torus = true;
        for (int e : img.extents()) torus = torus && e >= 2;

        auto inspect = [&](const FilteredComplex& cx, Index expected_cells,
                           const char* who) -> std::string {
            if (cx.size() != expected_cells)
                return std::string(who) + ": expected " + std::to_string(expected_cells) +
                       " cells, built " + std::to_string(cx.size());
            const auto violations = cx.validate();
            if (!violations.empty()) return std::string(who) + ": " + violations.front();
            for (Index i = 0; i < cx.size(); ++i)
                if (static_cast<int>(cx[i].facets.size()) != 2 * cx[i].dim)
                    return std::string(who) + ": cell " + std::to_string(i) + " has " +
                           std::to_string(cx[i].facets.size()) + " facets";
            return {};
        };

        Index v_cells = 1, t_cells = 1, p_cells = 1;
        for (int e : img.extents()) {
            v_cells *= 2 * e - 1;
            t_cells *= 2 * e + 1;
            p_cells *= 2 * e;
        }
        if (auto why = inspect(build_v_complex(img), v_cells, "V"); !why.empty())
            return detail::fail(name, why);
        if (auto why = inspect(build_t_complex(img), t_cells, "T"); !why.empty())
            return detail::fail(name, why);

        for (Construction c : {Construction::V, Construction::T}) {
            const PersistenceDiagram dgm = compute_diagram(img, c);
            Index essentials = 0;
            for (const Interval& ivl : dgm.intervals()) essentials += ivl.finite() ? 0 : 1;
            if (essentials != 1 || dgm.essential_count(0) != 1)
                return detail::fail(name, "box complex should have exactly one essential class");
        }

        if (torus) {
            if (auto why = inspect(build_v_complex(img, true), p_cells, "periodic V"); !why.empty())
                return detail::fail(name, why);
            if (auto why = inspect(build_t_complex(img, true), p_cells, "periodic T"); !why.empty())
                return detail::fail(name, why);
            std::vector<Index> binomial(static_cast<std::size_t>(d) + 1, 1);
            for (int k = 1; k <= d; ++k)
                binomial[static_cast<std::size_t>(k)] =
                    binomial[static_cast<std::size_t>(k - 1)] * (d - k + 1) / k;
            for (Construction c : {Construction::V, Construction::T}) {
                const PersistenceDiagram dgm = compute_diagram(img, c, true);
                for (int k = 0; k <= d; ++k)
                    if (dgm.essential_count(k) != binomial[static_cast<std::size_t>(k)])
                        return detail::fail(name, "torus essential classes are not binomial");
            }
        }
        return CheckOutcome{name, true, false, "cell counts, validity and essentials as expected"};
    });
}

/// Random strictly upper-triangular matrices: the anti-transpose is an
/// involution, corner ranks satisfy rank(i, j) = rank'(n-j, n-i), the pairing
/// rank function matches across the anti-transpose at every position, and the
/// reduction pairing equals the rank oracle.
inline CheckOutcome rank_identities(std::uint64_t seed, int trials, Index max_size) {
    const std::string name = "rank-identities";
    return checks::detail::guarded(name, [&]() -> CheckOutcome {
        SplitMix64 rng(seed);
        for (int t = 0; t < trials; ++t) {
            const Index n1 = rng.next_in(2, max_size);
            const Index n = n1 - 1;
            BoundaryMatrix mat(n1);
            for (Index j = 0; j < n1; ++j) {
                std::vector<Index> rows;
                for (Index i = 0; i < j; ++i)
                    if (rng.chance(0.3)) rows.push_back(i);
                mat.set_column(j, std::move(rows));
            }
            const BoundaryMatrix flipped = anti_transpose(mat);
            if (!(anti_transpose(flipped) == mat))
                return detail::fail(name, "anti-transpose is not an involution");

            const auto ranks = corner_rank_table(mat);
            const auto flipped_ranks = corner_rank_table(flipped);
            auto rank_of = [n1](const std::vector<std::vector<std::int32_t>>& table, Index i,
                                Index j) -> std::int32_t {
                if (i >= n1 || j < 0) return 0;
                return table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            };
            for (Index i = 0; i < n1; ++i)
                for (Index j = 0; j < n1; ++j)
                    if (rank_of(ranks, i, j) != rank_of(flipped_ranks, n - j, n - i))
                        return detail::fail(name, "corner rank identity fails at (" +
                                                      std::to_string(i) + "," + std::to_string(j) + ")");
            auto pairing_rank = [&](const std::vector<std::vector<std::int32_t>>& table, Index i,
                                    Index j) {
                return rank_of(table, i, j) - rank_of(table, i, j - 1) - rank_of(table, i + 1, j) +
                       rank_of(table, i + 1, j - 1);
            };
            for (Index i = 0; i < n1; ++i)
                for (Index j = i + 1; j < n1; ++j)
                    if (pairing_rank(ranks, i, j) != pairing_rank(flipped_ranks, n - j, n - i))
                        return detail::fail(name, "pairing rank identity fails at (" +
                                                      std::to_string(i) + "," + std::to_string(j) + ")");
            if (!(reduce(mat) == rank_pairing_oracle(mat, n1)))
                return detail::fail(name, "reduction pairing differs from the rank oracle");
        }
        return CheckOutcome{name, true, false, std::to_string(trials) + " random matrices"};
    });
}

}  // namespace checks

/// Every per-image check, in a fixed order.
inline std::vector<CheckOutcome> run_image_checks(const GrayscaleImage& img, Index oracle_limit,
                                                  bool inject_fault = false) {
    return {
        checks::complex_invariants(img),
        checks::oracle_equivalence(img, oracle_limit, inject_fault),
        checks::dual_pairing_torus(img),
        checks::dual_pairing_sphere(img),
        checks::dual_complex_pairs(img),
        checks::dual_diagram_map(img),
        checks::padding_invariance(img),
        checks::cap_attachment(img),
        checks::quotient_diagram(img),
        checks::construction_transforms(img),
    };
}

}  // namespace cubedual
