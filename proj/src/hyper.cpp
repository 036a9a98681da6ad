#include "finsheaf/hyper.hpp"

namespace finsheaf {

SheafResolution as_resolution(const Resolution& r) {
    return SheafResolution{r.base, r.terms, r.augmentation, r.differentials};
}

DoubleComplex godement_double_complex(const SheafComplex& l, std::size_t pmax) {
    const std::size_t qmax = l.length() - 1;
    const FiniteSpace::Mask whole = l.space().whole();
    const std::size_t depth = (pmax == 0) ? 0 : pmax - 1;

    std::vector<Resolution> res;
    for (std::size_t q = 0; q <= qmax; ++q)
        res.push_back(godement_resolution(l.terms()[q], depth));
    std::vector<std::vector<SheafHom>> towers;
    for (std::size_t q = 0; q < qmax; ++q)
        towers.push_back(godement_hom_tower(res[q], res[q + 1], l.differentials()[q]));

    std::vector<std::vector<SectionData>> sd(pmax + 1);
    for (std::size_t p = 0; p <= pmax; ++p)
        for (std::size_t q = 0; q <= qmax; ++q)
            sd[p].push_back(sections(res[q].terms[p], whole));

    std::vector<std::vector<FpGroup>> cells(pmax + 1, std::vector<FpGroup>(qmax + 1));
    for (std::size_t p = 0; p <= pmax; ++p)
        for (std::size_t q = 0; q <= qmax; ++q) cells[p][q] = sd[p][q].group;

    std::vector<std::vector<GroupHom>> horiz, vert;
    for (std::size_t p = 0; p < pmax; ++p) {
        std::vector<GroupHom> row;
        for (std::size_t q = 0; q <= qmax; ++q)
            row.push_back(section_hom(res[q].differentials[p], sd[p][q], sd[p + 1][q]));
        horiz.push_back(std::move(row));
    }
    for (std::size_t p = 0; p <= pmax; ++p) {
        std::vector<GroupHom> row;
        for (std::size_t q = 0; q < qmax; ++q)
            row.push_back(section_hom(towers[q][p], sd[p][q], sd[p][q + 1]));
        vert.push_back(std::move(row));
    }
    return DoubleComplex(std::move(cells), std::move(horiz), std::move(vert));
}

Hypercohomology hypercohomology(const SheafComplex& l, std::size_t kmax) {
    DoubleComplex dc = godement_double_complex(l, kmax + 1);
    const std::size_t rmax = std::max(dc.pmax(), dc.qmax()) + 2;

    Hypercohomology h;
    h.by_p = spectral_sequence(dc, Axis::by_p, rmax);
    h.by_q = spectral_sequence(dc, Axis::by_q, rmax);
    for (std::size_t n = 0; n <= kmax; ++n) h.groups.push_back(h.by_p.total_cohomology[n]);
    return h;
}

AcyclicReport acyclic_resolution_check(const Sheaf& f, const SheafResolution& r,
                                       std::size_t kmax) {
    const FiniteSpace& x = f.space();
    if (!(r.augmentation.source() == f) || !(r.augmentation.target() == r.terms.front()))
        fail(ErrorKind::NotAResolution, "augmentation does not map the base into the first term");
    if (r.terms.size() < kmax + 2)
        fail(ErrorKind::NotAResolution, "resolution too short for the requested degree");
    if (r.differentials.size() + 1 != r.terms.size())
        fail(ErrorKind::NotAResolution, "differential count must be term count minus one");

    // exactness of 0 -> F -> L^0 -> L^1 -> ...
    for (std::size_t p = 0; p < x.size(); ++p)
        if (!r.augmentation.stalk_map(p).is_injective())
            fail(ErrorKind::NotAResolution, "augmentation not injective at " + x.point_name(p));
    std::vector<SheafHom> maps;
    maps.push_back(r.augmentation);
    for (const SheafHom& d : r.differentials) maps.push_back(d);
    ExactnessReport ex = is_exact_sequence(maps);
    if (!ex.exact) fail(ErrorKind::NotAResolution, "sequence fails exactness at an interior term");

    AcyclicReport rep;
    rep.all_acyclic = true;
    for (std::size_t q = 0; q <= kmax + 1 && q < r.terms.size(); ++q) {
        std::vector<FpGroup> h = sheaf_cohomology(r.terms[q], kmax);
        for (std::size_t k = 1; k <= kmax; ++k)
            if (!h[k].is_trivial()) {
                rep.all_acyclic = false;
                rep.acyclic_failures.emplace_back(q, k);
            }
    }

    const FiniteSpace::Mask whole = x.whole();
    std::vector<SectionData> sd;
    for (std::size_t q = 0; q <= kmax + 1; ++q) sd.push_back(sections(r.terms[q], whole));
    std::vector<FpGroup> terms;
    for (const SectionData& s : sd) terms.push_back(s.group);
    std::vector<GroupHom> diffs;
    for (std::size_t q = 0; q <= kmax; ++q)
        diffs.push_back(section_hom(r.differentials[q], sd[q], sd[q + 1]));
    GroupComplex sections_complex(std::move(terms), std::move(diffs));
    for (std::size_t k = 0; k <= kmax; ++k) rep.h_sections.push_back(sections_complex.cohomology(k));

    rep.h_sheaf = sheaf_cohomology(f, kmax);
    rep.isomorphic = true;
    for (std::size_t k = 0; k <= kmax; ++k)
        if (!rep.h_sections[k].same_invariants(rep.h_sheaf[k])) rep.isomorphic = false;
    rep.verdict = rep.all_acyclic && rep.isomorphic;

    // degeneration patterns on the associated double complex
    std::vector<Sheaf> lterms(r.terms.begin(), r.terms.begin() + kmax + 2);
    std::vector<SheafHom> ldiffs(r.differentials.begin(), r.differentials.begin() + kmax + 1);
    SheafComplex lc(std::move(lterms), std::move(ldiffs));
    Hypercohomology hc = hypercohomology(lc, kmax);
    rep.row_pattern_ok = true;
    for (std::size_t p = 0; p <= hc.by_p.pmax; ++p)
        for (std::size_t q = 1; q <= hc.by_p.qmax; ++q)
            if (!hc.by_p.pages[1][p][q].is_trivial()) rep.row_pattern_ok = false;
    rep.column_pattern_ok = true;
    for (std::size_t a = 0; a <= hc.by_q.pmax; ++a)
        for (std::size_t b = 1; b <= hc.by_q.qmax; ++b)
            if (!hc.by_q.pages[1][a][b].is_trivial()) rep.column_pattern_ok = false;
    return rep;
}

} // namespace finsheaf
