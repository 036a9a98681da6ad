#include "finsheaf/corpus.hpp"

namespace finsheaf::corpus {

namespace {

SpacePtr make_space(std::vector<std::string> pts,
                    std::vector<std::pair<std::string, std::string>> leq) {
    return std::make_shared<const FiniteSpace>(std::move(pts), leq);
}

} // namespace

SpacePtr point_space() {
    static SpacePtr s = make_space({"p"}, {});
    return s;
}

SpacePtr sierpinski() {
    static SpacePtr s = make_space({"a", "b"}, {{"a", "b"}});
    return s;
}

SpacePtr discrete_two() {
    static SpacePtr s = make_space({"a", "b"}, {});
    return s;
}

SpacePtr pseudocircle() {
    static SpacePtr s = make_space({"a", "b", "c", "d"},
                                   {{"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"}});
    return s;
}

SpacePtr sphere6() {
    static SpacePtr s = make_space({"a", "b", "c", "d", "e", "f"},
                                   {{"a", "c"}, {"a", "d"}, {"b", "c"}, {"b", "d"},
                                    {"c", "e"}, {"c", "f"}, {"d", "e"}, {"d", "f"}});
    return s;
}

std::vector<std::string> space_names() {
    return {"point", "sierpinski", "discrete2", "pseudocircle", "sphere6"};
}

SpacePtr space_by_name(const std::string& name) {
    if (name == "point") return point_space();
    if (name == "sierpinski") return sierpinski();
    if (name == "discrete2") return discrete_two();
    if (name == "pseudocircle") return pseudocircle();
    if (name == "sphere6") return sphere6();
    fail(ErrorKind::SchemaError, "unknown bundled space '" + name + "'");
}

std::vector<std::string> sheaf_names(const SpacePtr& space) {
    std::vector<std::string> names = {"constZ", "constZ2", "zero"};
    for (const std::string& p : space->points()) names.push_back("sky:" + p);
    return names;
}

Sheaf sheaf_by_name(const SpacePtr& space, const std::string& name) {
    if (name == "constZ") return constant_sheaf(space, FpGroup::free(1));
    if (name == "constZ2") return constant_sheaf(space, FpGroup::cyclic(2));
    if (name == "zero") return zero_sheaf(space);
    if (name.rfind("sky:", 0) == 0)
        return skyscraper(space, space->point_index(name.substr(4)), FpGroup::free(1));
    fail(ErrorKind::SchemaError, "unknown bundled sheaf '" + name + "'");
}

std::vector<NamedSheaf> standard_pairs() {
    std::vector<NamedSheaf> out;
    auto add = [&](const std::string& sp, const std::string& sh) {
        SpacePtr space = space_by_name(sp);
        out.push_back(NamedSheaf{sp, sh, sheaf_by_name(space, sh)});
    };
    add("point", "constZ");
    add("point", "constZ2");
    add("sierpinski", "constZ");
    add("sierpinski", "sky:b");
    add("discrete2", "constZ");
    add("discrete2", "zero");
    add("pseudocircle", "constZ");
    add("pseudocircle", "constZ2");
    add("pseudocircle", "sky:c");
    add("pseudocircle", "sky:a");
    add("pseudocircle", "zero");
    add("sphere6", "constZ");
    add("sphere6", "sky:e");
    return out;
}

std::vector<NamedSheaf> closed_skyscrapers() {
    std::vector<NamedSheaf> out;
    auto add = [&](const std::string& sp, const std::string& sh) {
        SpacePtr space = space_by_name(sp);
        out.push_back(NamedSheaf{sp, sh, sheaf_by_name(space, sh)});
    };
    add("sierpinski", "sky:b");
    add("discrete2", "sky:a");
    add("pseudocircle", "sky:c");
    add("pseudocircle", "sky:d");
    add("sphere6", "sky:e");
    add("sphere6", "sky:f");
    return out;
}

SheafComplex single_complex(const Sheaf& f) { return SheafComplex({f}, {}); }

namespace {

SheafResolution pad_resolution(SheafResolution r, std::size_t kmax) {
    Sheaf zero = zero_sheaf(r.base.space_ptr());
    while (r.terms.size() < kmax + 2) {
        r.differentials.push_back(SheafHom::zero(r.terms.back(), zero));
        r.terms.push_back(zero);
    }
    return r;
}

} // namespace

SheafResolution sierpinski_handbuilt_resolution(std::size_t kmax) {
    SpacePtr x = sierpinski();
    Sheaf f = constant_sheaf(x, FpGroup::free(1));
    std::size_t a = x->point_index("a"), b = x->point_index("b");

    // L0 = constZ (+) skyscraper at the closed point b
    std::vector<FpGroup> l0_stalks(2);
    l0_stalks[a] = FpGroup::free(1);
    l0_stalks[b] = FpGroup::free(2);
    std::map<std::pair<std::size_t, std::size_t>, GroupHom> l0_rest;
    l0_rest.emplace(std::make_pair(b, a),
                    GroupHom(l0_stalks[b], l0_stalks[a],
                             IntMatrix(1, 2, {Int(1), Int(0)})));
    Sheaf l0(x, l0_stalks, l0_rest);

    Sheaf l1 = skyscraper(x, b, FpGroup::free(1));

    std::vector<GroupHom> aug(2, GroupHom::identity(FpGroup::trivial()));
    aug[a] = GroupHom(f.stalk(a), l0.stalk(a), IntMatrix(1, 1, {Int(1)}));
    aug[b] = GroupHom(f.stalk(b), l0.stalk(b), IntMatrix(2, 1, {Int(1), Int(0)}));

    std::vector<GroupHom> d0(2, GroupHom::identity(FpGroup::trivial()));
    d0[a] = GroupHom::zero(l0.stalk(a), l1.stalk(a));
    d0[b] = GroupHom(l0.stalk(b), l1.stalk(b), IntMatrix(1, 2, {Int(0), Int(1)}));

    SheafResolution r{f, {l0, l1}, SheafHom(f, l0, aug), {SheafHom(l0, l1, d0)}};
    return pad_resolution(std::move(r), kmax);
}

SheafResolution pseudocircle_handbuilt_resolution(std::size_t kmax) {
    SpacePtr x = pseudocircle();
    Sheaf f = constant_sheaf(x, FpGroup::free(1));
    std::size_t a = x->point_index("a"), b = x->point_index("b");
    std::size_t c = x->point_index("c"), d = x->point_index("d");

    // L0 = skyscraper(a) (+) skyscraper(b): stalk Z at each open point, Z^2
    // at each closed point (first coordinate from a's closure, second from b's)
    std::vector<FpGroup> l0_stalks(4);
    l0_stalks[a] = FpGroup::free(1);
    l0_stalks[b] = FpGroup::free(1);
    l0_stalks[c] = FpGroup::free(2);
    l0_stalks[d] = FpGroup::free(2);
    std::map<std::pair<std::size_t, std::size_t>, GroupHom> l0_rest;
    for (std::size_t top : {c, d}) {
        l0_rest.emplace(std::make_pair(top, a),
                        GroupHom(l0_stalks[top], l0_stalks[a], IntMatrix(1, 2, {Int(1), Int(0)})));
        l0_rest.emplace(std::make_pair(top, b),
                        GroupHom(l0_stalks[top], l0_stalks[b], IntMatrix(1, 2, {Int(0), Int(1)})));
    }
    Sheaf l0(x, l0_stalks, l0_rest);

    // L1 = skyscraper(c) (+) skyscraper(d); both closed points, so disjoint
    // one-point supports
    std::vector<FpGroup> l1_stalks(4);
    l1_stalks[c] = FpGroup::free(1);
    l1_stalks[d] = FpGroup::free(1);
    std::map<std::pair<std::size_t, std::size_t>, GroupHom> l1_rest;
    for (std::size_t top : {c, d})
        for (std::size_t bot : {a, b})
            l1_rest.emplace(std::make_pair(top, bot),
                            GroupHom::zero(l1_stalks[top], l1_stalks[bot]));
    Sheaf l1(x, l1_stalks, l1_rest);

    std::vector<GroupHom> aug(4, GroupHom::identity(FpGroup::trivial()));
    aug[a] = GroupHom(f.stalk(a), l0.stalk(a), IntMatrix(1, 1, {Int(1)}));
    aug[b] = GroupHom(f.stalk(b), l0.stalk(b), IntMatrix(1, 1, {Int(1)}));
    aug[c] = GroupHom(f.stalk(c), l0.stalk(c), IntMatrix(2, 1, {Int(1), Int(1)}));
    aug[d] = GroupHom(f.stalk(d), l0.stalk(d), IntMatrix(2, 1, {Int(1), Int(1)}));

    std::vector<GroupHom> d0(4, GroupHom::identity(FpGroup::trivial()));
    d0[a] = GroupHom::zero(l0.stalk(a), l1.stalk(a));
    d0[b] = GroupHom::zero(l0.stalk(b), l1.stalk(b));
    d0[c] = GroupHom(l0.stalk(c), l1.stalk(c), IntMatrix(1, 2, {Int(1), Int(-1)}));
    d0[d] = GroupHom(l0.stalk(d), l1.stalk(d), IntMatrix(1, 2, {Int(1), Int(-1)}));

    SheafResolution r{f, {l0, l1}, SheafHom(f, l0, aug), {SheafHom(l0, l1, d0)}};
    return pad_resolution(std::move(r), kmax);
}

SheafResolution pseudocircle_nonacyclic_resolution(std::size_t kmax) {
    SpacePtr x = pseudocircle();
    Sheaf f = constant_sheaf(x, FpGroup::free(1));
    SheafResolution r{f, {f}, SheafHom::identity(f), {}};
    return pad_resolution(std::move(r), kmax);
}

std::vector<std::string> resolution_names() {
    return {"sierpinski_skyscrapers", "pseudocircle_skyscrapers", "pseudocircle_nonacyclic"};
}

SheafResolution resolution_by_name(const std::string& name, std::size_t kmax) {
    if (name == "sierpinski_skyscrapers") return sierpinski_handbuilt_resolution(kmax);
    if (name == "pseudocircle_skyscrapers") return pseudocircle_handbuilt_resolution(kmax);
    if (name == "pseudocircle_nonacyclic") return pseudocircle_nonacyclic_resolution(kmax);
    fail(ErrorKind::SchemaError, "unknown bundled resolution '" + name + "'");
}

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, IntMatrix* inverse) {
    IntMatrix g = IntMatrix::identity(n);
    IntMatrix ginv = IntMatrix::identity(n);
    if (n < 2) {
        if (inverse) *inverse = ginv;
        return g;
    }
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (std::size_t step = 0; step < 3 * n; ++step) {
        std::size_t i = pick(rng), j = pick(rng);
        if (i == j) continue;
        int k = coeff(rng);
        // row_j += k row_i on g; col_i -= k col_j on the inverse
        for (std::size_t c = 0; c < n; ++c) g.at(j, c) += k * g.at(i, c);
        for (std::size_t r = 0; r < n; ++r) ginv.at(r, i) -= k * ginv.at(r, j);
    }
    if (inverse) *inverse = ginv;
    return g;
}

DoubleComplex random_double_complex(std::mt19937_64& rng, std::size_t pmax, std::size_t qmax,
                                    std::size_t max_rank) {
    std::vector<std::vector<std::size_t>> rank(pmax + 1, std::vector<std::size_t>(qmax + 1, 0));

    struct Entry {
        std::size_t sp, sq, si; // source cell and generator
        std::size_t tp, tq, ti; // target cell and generator
        Int value;
        bool horizontal;
    };
    std::vector<Entry> entries;

    std::uniform_int_distribution<std::size_t> pp(0, pmax), qq(0, qmax), kind(0, 3);
    std::uniform_int_distribution<int> scalar(-3, 3);
    const std::size_t attempts = 4 * (pmax + 1) * (qmax + 1);
    for (std::size_t step = 0; step < attempts; ++step) {
        std::size_t which = kind(rng);
        std::size_t p = pp(rng), q = qq(rng);
        if (which == 0) { // dot
            if (rank[p][q] < max_rank) rank[p][q]++;
        } else if (which == 1 && p < pmax) { // horizontal interval, scaled
            if (rank[p][q] < max_rank && rank[p + 1][q] < max_rank) {
                std::size_t si = rank[p][q]++, ti = rank[p + 1][q]++;
                entries.push_back({p, q, si, p + 1, q, ti, Int(scalar(rng)), true});
            }
        } else if (which == 2 && q < qmax) { // vertical interval, scaled
            if (rank[p][q] < max_rank && rank[p][q + 1] < max_rank) {
                std::size_t si = rank[p][q]++, ti = rank[p][q + 1]++;
                entries.push_back({p, q, si, p, q + 1, ti, Int(scalar(rng)), false});
            }
        } else if (which == 3 && p < pmax && q < qmax) { // commuting square
            if (rank[p][q] < max_rank && rank[p + 1][q] < max_rank &&
                rank[p][q + 1] < max_rank && rank[p + 1][q + 1] < max_rank) {
                std::size_t i00 = rank[p][q]++, i10 = rank[p + 1][q]++;
                std::size_t i01 = rank[p][q + 1]++, i11 = rank[p + 1][q + 1]++;
                Int a(scalar(rng)), b(scalar(rng));
                entries.push_back({p, q, i00, p + 1, q, i10, a, true});       // bottom
                entries.push_back({p, q, i00, p, q + 1, i01, b, false});      // left
                entries.push_back({p + 1, q, i10, p + 1, q + 1, i11, b, false}); // right
                entries.push_back({p, q + 1, i01, p + 1, q + 1, i11, a, true});  // top
            }
        }
    }
    if (rank[0][0] == 0) rank[0][0] = 1; // keep at least one nonzero cell

    std::vector<std::vector<IntMatrix>> horiz(pmax, std::vector<IntMatrix>(qmax + 1));
    std::vector<std::vector<IntMatrix>> vert(pmax + 1, std::vector<IntMatrix>(qmax));
    for (std::size_t p = 0; p < pmax; ++p)
        for (std::size_t q = 0; q <= qmax; ++q) horiz[p][q] = IntMatrix(rank[p + 1][q], rank[p][q]);
    for (std::size_t p = 0; p <= pmax; ++p)
        for (std::size_t q = 0; q < qmax; ++q) vert[p][q] = IntMatrix(rank[p][q + 1], rank[p][q]);
    for (const Entry& e : entries) {
        if (e.horizontal)
            horiz[e.sp][e.sq].at(e.ti, e.si) = e.value;
        else
            vert[e.sp][e.sq].at(e.ti, e.si) = e.value;
    }

    // conjugate every cell by a random unimodular basis change
    std::vector<std::vector<IntMatrix>> g(pmax + 1, std::vector<IntMatrix>(qmax + 1));
    std::vector<std::vector<IntMatrix>> ginv(pmax + 1, std::vector<IntMatrix>(qmax + 1));
    for (std::size_t p = 0; p <= pmax; ++p)
        for (std::size_t q = 0; q <= qmax; ++q)
            g[p][q] = random_unimodular(rng, rank[p][q], &ginv[p][q]);
    for (std::size_t p = 0; p < pmax; ++p)
        for (std::size_t q = 0; q <= qmax; ++q)
            horiz[p][q] = g[p + 1][q] * horiz[p][q] * ginv[p][q];
    for (std::size_t p = 0; p <= pmax; ++p)
        for (std::size_t q = 0; q < qmax; ++q)
            vert[p][q] = g[p][q + 1] * vert[p][q] * ginv[p][q];

    std::vector<std::vector<FpGroup>> cells(pmax + 1, std::vector<FpGroup>(qmax + 1));
    for (std::size_t p = 0; p <= pmax; ++p)
        for (std::size_t q = 0; q <= qmax; ++q) cells[p][q] = FpGroup::free(rank[p][q]);

    std::vector<std::vector<GroupHom>> hh, vv;
    for (std::size_t p = 0; p < pmax; ++p) {
        std::vector<GroupHom> row;
        for (std::size_t q = 0; q <= qmax; ++q)
            row.push_back(GroupHom(cells[p][q], cells[p + 1][q], horiz[p][q]));
        hh.push_back(std::move(row));
    }
    for (std::size_t p = 0; p <= pmax; ++p) {
        std::vector<GroupHom> row;
        for (std::size_t q = 0; q < qmax; ++q)
            row.push_back(GroupHom(cells[p][q], cells[p][q + 1], vert[p][q]));
        vv.push_back(std::move(row));
    }
    return DoubleComplex(std::move(cells), std::move(hh), std::move(vv));
}

} // namespace finsheaf::corpus
