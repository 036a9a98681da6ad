#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "finsheaf/corpus.hpp"
#include "finsheaf/hyper.hpp"
#include "finsheaf/spectral.hpp"

using namespace finsheaf;

namespace {

IntMatrix mat(std::size_t r, std::size_t c, std::vector<long> entries) {
    std::vector<Int> e;
    for (long v : entries) e.push_back(Int(v));
    return IntMatrix(r, c, std::move(e));
}

FpGroup Z(std::size_t n = 1) { return FpGroup::free(n); }

// Double complex with one nontrivial row (q = 0): 0 -> Z --2--> Z -> 0.
DoubleComplex one_row() {
    std::vector<std::vector<FpGroup>> cells{{Z(), FpGroup::trivial()},
                                            {Z(), FpGroup::trivial()}};
    std::vector<std::vector<GroupHom>> horiz{
        {GroupHom::scalar(Z(), 2), GroupHom::zero(FpGroup::trivial(), FpGroup::trivial())}};
    std::vector<std::vector<GroupHom>> vert{
        {GroupHom::zero(Z(), FpGroup::trivial())},
        {GroupHom::zero(Z(), FpGroup::trivial())}};
    return DoubleComplex(cells, horiz, vert);
}

} // namespace

TEST_CASE("group complex validation and cohomology") {
    GroupHom f(Z(), Z(), mat(1, 1, {2}));
    GroupHom zero = GroupHom::zero(Z(), Z());
    GroupComplex c({Z(), Z(), Z()}, {f, zero});
    CHECK(c.cohomology(0).is_trivial());
    CHECK(c.cohomology(1).same_invariants(FpGroup::cyclic(2)));
    CHECK(c.cohomology(2).rank() == 1);

    CHECK_THROWS_WITH_AS(GroupComplex({Z(), Z(), Z()}, {f, f}),
                         doctest::Contains("NotAComplex"), Error);
    CHECK_THROWS_WITH_AS(GroupComplex({Z(), Z(2)}, {f}),
                         doctest::Contains("ChainMismatch"), Error);
}

TEST_CASE("cohomology sheaves of a complex of sheaves") {
    SpacePtr circ = corpus::pseudocircle();
    Sheaf cz = constant_sheaf(circ, Z());

    // zero differential: cohomology sheaves are the terms themselves
    SheafComplex c({cz, cz}, {SheafHom::zero(cz, cz)});
    auto hs = cohomology_sheaves(c);
    REQUIRE(hs.size() == 2);
    for (std::size_t p = 0; p < circ->size(); ++p) {
        CHECK(hs[0].stalk(p).same_invariants(Z()));
        CHECK(hs[1].stalk(p).same_invariants(Z()));
    }

    // multiplication by two: H^0 = 0, H^1 = constant Z/2
    std::vector<GroupHom> two;
    for (std::size_t p = 0; p < circ->size(); ++p)
        two.push_back(GroupHom::scalar(cz.stalk(p), 2));
    auto ht = cohomology_sheaves(SheafComplex({cz, cz}, {SheafHom(cz, cz, two)}));
    for (std::size_t p = 0; p < circ->size(); ++p) {
        CHECK(ht[0].stalk(p).is_trivial());
        CHECK(ht[1].stalk(p).same_invariants(FpGroup::cyclic(2)));
    }
    // the induced restrictions are functorial (constructor validates), and the
    // resulting sheaf has the right sections
    CHECK(sections(ht[1], circ->whole()).group.same_invariants(FpGroup::cyclic(2)));
}

TEST_CASE("total complex of a worked example") {
    // square with cells Z everywhere, horizontal = vertical = identity
    std::vector<std::vector<FpGroup>> cells{{Z(), Z()}, {Z(), Z()}};
    std::vector<std::vector<GroupHom>> horiz{{GroupHom::identity(Z()), GroupHom::identity(Z())}};
    std::vector<std::vector<GroupHom>> vert{{GroupHom::identity(Z())}, {GroupHom::identity(Z())}};
    DoubleComplex k(cells, horiz, vert);

    TotalComplex t = total_complex(k);
    REQUIRE(t.complex.length() == 3);
    CHECK(t.complex.terms()[0].rank() == 1);
    CHECK(t.complex.terms()[1].rank() == 2);
    CHECK(t.complex.terms()[2].rank() == 1);
    CHECK(t.layout[1].size() == 2);
    CHECK(t.layout[1][0].p == 0); // increasing filtration degree
    // the square is exact as a total complex
    for (std::size_t n = 0; n < 3; ++n) CHECK(t.complex.cohomology(n).is_trivial());

    // without the sign twist D^2 != 0
    CHECK_THROWS_WITH_AS(total_complex(k, false), doctest::Contains("SignViolation"), Error);
}

TEST_CASE("double complex construction is validated") {
    std::vector<std::vector<FpGroup>> cells{{Z(), Z()}, {Z(), Z()}};
    std::vector<std::vector<GroupHom>> vert{{GroupHom::identity(Z())}, {GroupHom::identity(Z())}};
    // non-commuting square: horizontal identity on the bottom, x2 on top
    std::vector<std::vector<GroupHom>> horiz{{GroupHom::identity(Z()), GroupHom::scalar(Z(), 2)}};
    CHECK_THROWS_WITH_AS(DoubleComplex(cells, horiz, vert),
                         doctest::Contains("SignViolation"), Error);

    std::vector<std::vector<GroupHom>> badh{
        {GroupHom::zero(Z(), Z(2)), GroupHom::zero(Z(), Z())}};
    CHECK_THROWS_WITH_AS(DoubleComplex(cells, badh, vert),
                         doctest::Contains("ChainMismatch"), Error);
}

TEST_CASE("one-row complex: immediate degeneration") {
    DoubleComplex k = one_row();
    SpectralPages sp = spectral_sequence(k, Axis::by_p, 6);
    CHECK(sp.rstar <= 3);
    CHECK(sp.converged);
    CHECK(sp.extension_flags.empty());
    // E_1 row q = 0 is the cohomology of the row from page 2 on
    CHECK(sp.pages[2][0][0].is_trivial());
    CHECK(sp.pages[2][1][0].same_invariants(FpGroup::cyclic(2)));
    // E_2 = E_infinity here
    for (std::size_t p = 0; p <= sp.pmax; ++p)
        for (std::size_t q = 0; q <= sp.qmax; ++q)
            CHECK(sp.pages[2][p][q].same_invariants(sp.einf[p][q]));
    CHECK(sp.total_cohomology[0].is_trivial());
    CHECK(sp.total_cohomology[1].same_invariants(FpGroup::cyclic(2)));

    CHECK_THROWS_WITH_AS(spectral_sequence(k, Axis::by_p, 1),
                         doctest::Contains("NotStabilized"), Error);
}

TEST_CASE("exact columns force a vanishing limit page") {
    // each column 0 -> Z --id--> Z -> 0, zero horizontal maps
    std::vector<std::vector<FpGroup>> cells{{Z(), Z()}, {Z(), Z()}};
    std::vector<std::vector<GroupHom>> horiz{{GroupHom::zero(Z(), Z()), GroupHom::zero(Z(), Z())}};
    std::vector<std::vector<GroupHom>> vert{{GroupHom::identity(Z())}, {GroupHom::identity(Z())}};
    DoubleComplex k(cells, horiz, vert);

    SpectralPages sp = spectral_sequence(k, Axis::by_p, 6);
    for (std::size_t p = 0; p <= 1; ++p)
        for (std::size_t q = 0; q <= 1; ++q) {
            CHECK(sp.pages[1][p][q].is_trivial()); // E_1 = column cohomology
            CHECK(sp.einf[p][q].is_trivial());
        }
    for (const auto& h : sp.total_cohomology) CHECK(h.is_trivial());
    CHECK(sp.converged);
}

TEST_CASE("both filtrations of a mixed complex agree on the abutment") {
    std::mt19937_64 rng(5);
    DoubleComplex k = corpus::random_double_complex(rng, 2, 2, 3);
    SpectralPages bp = spectral_sequence(k, Axis::by_p, 6);
    SpectralPages bq = spectral_sequence(k, Axis::by_q, 6);
    REQUIRE(bp.total_cohomology.size() == bq.total_cohomology.size());
    for (std::size_t n = 0; n < bp.total_cohomology.size(); ++n)
        CHECK(bp.total_cohomology[n].same_invariants(bq.total_cohomology[n]));
    CHECK(bp.converged);
    CHECK(bq.converged);
}

TEST_CASE("page mechanics on random complexes") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        DoubleComplex k = corpus::random_double_complex(rng, 2, 2, 3);
        for (Axis axis : {Axis::by_p, Axis::by_q}) {
            SpectralPages sp = spectral_sequence(k, axis, 6);
            // differentials have bidegree (r, 1-r) and compose to zero
            for (std::size_t r = 1; r + 1 < sp.differentials.size(); ++r) {
                for (const auto& [src, d] : sp.differentials[r]) {
                    auto [p, q] = src;
                    CHECK(d.source().same_invariants(sp.pages[r][p][q]));
                    std::size_t tp = p + r, tq = q + 1 - r;
                    CHECK(d.target().same_invariants(sp.pages[r][tp][tq]));
                    auto next = sp.differentials[r].find({tp, tq});
                    if (next != sp.differentials[r].end())
                        CHECK(next->second.compose_after(d).is_zero_hom());
                }
            }
            // rank bookkeeping: sum of E_inf ranks on each antidiagonal equals
            // the rank of the total cohomology there
            for (std::size_t n = 0; n < sp.total_cohomology.size(); ++n) {
                std::size_t sum = 0;
                for (std::size_t p = 0; p <= sp.pmax; ++p) {
                    std::size_t q = n - p;
                    if (p <= n && q <= sp.qmax) sum += sp.einf[p][q].rank();
                }
                CHECK(sum == sp.total_cohomology[n].rank());
            }
            CHECK(sp.converged);
        }
    }
}

TEST_CASE("serial and parallel paths agree") {
    std::mt19937_64 rng(23);
    DoubleComplex k = corpus::random_double_complex(rng, 2, 2, 3);
    set_parallel(false);
    SpectralPages serial = spectral_sequence(k, Axis::by_p, 6);
    set_parallel(true);
    SpectralPages parallel = spectral_sequence(k, Axis::by_p, 6);
    REQUIRE(serial.pages.size() == parallel.pages.size());
    for (std::size_t r = 0; r < serial.pages.size(); ++r)
        for (std::size_t p = 0; p <= serial.pmax; ++p)
            for (std::size_t q = 0; q <= serial.qmax; ++q)
                CHECK(serial.pages[r][p][q].same_invariants(parallel.pages[r][p][q]));
}

TEST_CASE("hypercohomology of a single sheaf is its cohomology") {
    SpacePtr circ = corpus::pseudocircle();
    Sheaf cz = constant_sheaf(circ, Z());
    Hypercohomology hh = hypercohomology(corpus::single_complex(cz), 2);
    auto h = sheaf_cohomology(cz, 2);
    REQUIRE(hh.groups.size() == 3);
    for (std::size_t k = 0; k <= 2; ++k) CHECK(hh.groups[k].same_invariants(h[k]));
    CHECK(hh.by_p.converged);
    CHECK(hh.by_q.converged);
    CHECK(hh.by_p.extension_flags.empty());

    Hypercohomology z = hypercohomology(corpus::single_complex(zero_sheaf(circ)), 2);
    for (const auto& g : z.groups) CHECK(g.is_trivial());
}

TEST_CASE("resolution checker accepts and rejects correctly") {
    SpacePtr circ = corpus::pseudocircle();
    Sheaf cz = constant_sheaf(circ, Z());
    SheafResolution good = as_resolution(godement_resolution(cz, 2));
    AcyclicReport rep = acyclic_resolution_check(cz, good, 2);
    CHECK(rep.all_acyclic);
    CHECK(rep.isomorphic);
    CHECK(rep.verdict);
    CHECK(rep.row_pattern_ok);
    CHECK(rep.column_pattern_ok);

    SheafResolution bad = corpus::pseudocircle_nonacyclic_resolution(2);
    AcyclicReport rep2 = acyclic_resolution_check(cz, bad, 2);
    CHECK(!rep2.all_acyclic);
    REQUIRE(!rep2.acyclic_failures.empty());
    CHECK(rep2.acyclic_failures.front() == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(!rep2.verdict);

    // a non-resolution is an error, not a verdict
    SheafResolution broken = good;
    broken.differentials[0] = SheafHom::zero(broken.terms[0], broken.terms[1]);
    CHECK_THROWS_WITH_AS(acyclic_resolution_check(cz, broken, 2),
                         doctest::Contains("NotAResolution"), Error);
}
