#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "finsheaf/group.hpp"

using namespace finsheaf;

namespace {

IntMatrix mat(std::size_t r, std::size_t c, std::vector<long> entries) {
    std::vector<Int> e;
    for (long v : entries) e.push_back(Int(v));
    return IntMatrix(r, c, std::move(e));
}

Int igcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Int gcd_of_minors1(const IntMatrix& m) {
    Int g = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) g = igcd(g, m.at(i, j));
    return g;
}

Int gcd_of_minors2(const IntMatrix& m) {
    Int g = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = i + 1; k < m.rows(); ++k)
            for (std::size_t j = 0; j < m.cols(); ++j)
                for (std::size_t l = j + 1; l < m.cols(); ++l)
                    g = igcd(g, m.at(i, j) * m.at(k, l) - m.at(i, l) * m.at(k, j));
    return g;
}

void check_snf(const IntMatrix& m) {
    SnfResult snf = smith_normal_form(m);
    CHECK(snf.u * m * snf.v == snf.s);
    Int du = det(snf.u), dv = det(snf.v);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    std::vector<Int> d = snf.diagonal();
    for (const auto& e : d) CHECK(e >= 0);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        if (d[i] == 0)
            CHECK(d[i + 1] == 0);
        else
            CHECK(d[i + 1] % d[i] == 0);
    }
    // determinantal-divisor oracle for the first two invariant factors
    if (!d.empty()) CHECK(d[0] == gcd_of_minors1(m));
    if (d.size() >= 2 && snf.rank() >= 2) CHECK(d[0] * d[1] == gcd_of_minors2(m));
}

} // namespace

TEST_CASE("smith normal form on a worked example") {
    IntMatrix m = mat(2, 2, {2, 4, 6, 8});
    SnfResult snf = smith_normal_form(m);
    CHECK(snf.diagonal() == std::vector<Int>{2, 4});
    check_snf(m);
}

TEST_CASE("smith normal form specials") {
    check_snf(IntMatrix(0, 0));
    check_snf(IntMatrix(3, 2)); // zero matrix
    check_snf(IntMatrix::identity(4));
    check_snf(mat(1, 3, {6, 10, 15})); // gcd 1 despite no unit entry
}

TEST_CASE("smith normal form randomized suite") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 6), entry(-20, 20);
    for (int t = 0; t < 100; ++t) {
        std::size_t r = dim(rng), c = dim(rng);
        IntMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m.at(i, j) = entry(rng);
        check_snf(m);
    }
}

TEST_CASE("kernel and lattice solving") {
    IntMatrix m = mat(2, 3, {1, 2, 3, 2, 4, 6}); // rank 1
    IntMatrix k = kernel_basis(m);
    CHECK(k.cols() == 2);
    CHECK((m * k).is_zero());

    IntMatrix gens = mat(2, 2, {2, 0, 0, 3});
    CHECK(lattice_solve(gens, {Int(4), Int(-3)}).has_value());
    CHECK(!lattice_solve(gens, {Int(1), Int(0)}).has_value());
    CHECK(lattice_contains(gens, {Int(6), Int(6)}));

    // intersection of 2Z^2 and 3Z^2 is 6Z^2
    IntMatrix inter = lattice_intersect(mat(2, 2, {2, 0, 0, 2}), mat(2, 2, {3, 0, 0, 3}));
    SnfResult snf = smith_normal_form(inter);
    CHECK(snf.diagonal() == std::vector<Int>{6, 6});
}

TEST_CASE("canonical invariants of presented groups") {
    // Z/6 (+) Z/4 = Z/2 (+) Z/12
    FpGroup g = direct_sum({FpGroup::cyclic(6), FpGroup::cyclic(4)});
    CHECK(g.rank() == 0);
    CHECK(g.torsion() == std::vector<Int>{2, 12});
    CHECK(g.render() == "Z/2 \xE2\x8A\x95 Z/12");

    FpGroup h(3, mat(1, 3, {2, 4, 6}));
    CHECK(h.rank() == 2);
    CHECK(h.torsion() == std::vector<Int>{2});

    CHECK(FpGroup::trivial().render() == "0");
    CHECK(FpGroup::free(2).render() == "Z^2");
    CHECK(FpGroup::cyclic(0).rank() == 1);
}

TEST_CASE("hom validation and parts") {
    // Z/2 -> Z by 1 is not well defined
    CHECK_THROWS_WITH_AS(GroupHom(FpGroup::cyclic(2), FpGroup::free(1), mat(1, 1, {1})),
                         doctest::Contains("IllFormedHom"), Error);

    GroupHom twice(FpGroup::free(1), FpGroup::free(1), mat(1, 1, {2}));
    HomParts parts = hom_parts(twice);
    CHECK(parts.kernel.is_trivial());
    CHECK(parts.image.rank() == 1);
    CHECK(parts.cokernel.torsion() == std::vector<Int>{2});
    CHECK(twice.is_injective());
    CHECK(!twice.is_surjective());

    // multiplication by 2 on Z/4
    GroupHom m2(FpGroup::cyclic(4), FpGroup::cyclic(4), mat(1, 1, {2}));
    HomParts p2 = hom_parts(m2);
    CHECK(p2.kernel.torsion() == std::vector<Int>{2});
    CHECK(p2.image.torsion() == std::vector<Int>{2});
    CHECK(p2.cokernel.torsion() == std::vector<Int>{2});

    // exactness: ker(f)/0 inside source, im(f) = ker(coker projection)
    CHECK(cohomology_at(p2.kernel_inclusion, m2).group.is_trivial());
    CHECK(cohomology_at(p2.image_inclusion, p2.cokernel_projection).group.is_trivial());
}

TEST_CASE("subgroup lattice and preimages") {
    FpGroup z2 = FpGroup::free(2);
    Subgroup a{z2, mat(2, 2, {2, 0, 0, 2})};
    Subgroup b{z2, mat(2, 1, {1, 1})};
    SubgroupLattice l = subgroup_lattice(a, b);
    CHECK(!l.contains_a_b);
    CHECK(!l.contains_b_a);
    CHECK(quotient_by(l.sum).torsion() == std::vector<Int>{2});         // Z^2/(2Z^2 + (1,1))
    SnfResult snf = smith_normal_form(lattice_basis(l.intersection.generators));
    CHECK(snf.diagonal() == std::vector<Int>{2}); // (2,2)Z

    CHECK(l.sum.contains(a));
    CHECK(l.sum.contains(b));
    CHECK(a.contains(l.intersection));

    // preimage of 2Z under sum : Z^2 -> Z
    GroupHom sum(z2, FpGroup::free(1), mat(1, 2, {1, 1}));
    Subgroup s = preimage(sum, Subgroup{FpGroup::free(1), mat(1, 1, {2})});
    CHECK(s.contains({Int(1), Int(1)}));
    CHECK(!s.contains({Int(1), Int(0)}));

    CHECK_THROWS_WITH_AS(subgroup_lattice(a, Subgroup{FpGroup::free(3), IntMatrix(3, 0)}),
                         doctest::Contains("AmbientMismatch"), Error);
}

TEST_CASE("cohomology_at on a three-term complex") {
    FpGroup z = FpGroup::free(1);
    GroupHom f(z, z, mat(1, 1, {2}));
    GroupHom zero(z, z, mat(1, 1, {0}));
    CHECK(cohomology_at(f, zero).group.torsion() == std::vector<Int>{2});

    GroupHom g(z, z, mat(1, 1, {3}));
    CHECK_THROWS_WITH_AS(cohomology_at(f, g), doctest::Contains("NotAComplex"), Error);
    GroupHom h(FpGroup::free(2), z, mat(1, 2, {0, 0}));
    CHECK_THROWS_WITH_AS(cohomology_at(f, h), doctest::Contains("ChainMismatch"), Error);
}
