#include "finsheaf/godement.hpp"

namespace finsheaf {

namespace {

// Generator offset of point r's block inside prod_{q in U_p} F_q.
struct ProductLayout {
    std::vector<std::size_t> pts;
    std::vector<std::size_t> offsets;
    std::size_t total = 0;

    ProductLayout(const Sheaf& f, FiniteSpace::Mask u) {
        pts = f.space().mask_points(u);
        for (std::size_t q : pts) {
            offsets.push_back(total);
            total += f.stalk(q).gens();
        }
    }
    std::size_t offset_of(std::size_t r) const {
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (pts[i] == r) return offsets[i];
        throw std::logic_error("point not in product layout");
    }
};

} // namespace

GodementStep godement_step(const Sheaf& f) {
    const FiniteSpace& x = f.space();
    const std::size_t n = x.size();

    std::vector<ProductLayout> layout;
    std::vector<FpGroup> c0_stalks;
    for (std::size_t p = 0; p < n; ++p) {
        layout.emplace_back(f, x.minimal_open(p));
        std::vector<FpGroup> parts;
        for (std::size_t q : layout[p].pts) parts.push_back(f.stalk(q));
        c0_stalks.push_back(direct_sum(parts));
    }

    // Restrictions are coordinate projections: U_q sits inside U_p.
    std::map<std::pair<std::size_t, std::size_t>, GroupHom> c0_rest;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            if (!x.strictly_less(q, p)) continue;
            IntMatrix m(c0_stalks[q].gens(), c0_stalks[p].gens());
            for (std::size_t bi = 0; bi < layout[q].pts.size(); ++bi) {
                std::size_t r = layout[q].pts[bi];
                std::size_t src_off = layout[p].offset_of(r);
                std::size_t len = f.stalk(r).gens();
                for (std::size_t i = 0; i < len; ++i)
                    m.at(layout[q].offsets[bi] + i, src_off + i) = 1;
            }
            c0_rest.emplace(std::make_pair(p, q), GroupHom(c0_stalks[p], c0_stalks[q], m));
        }
    Sheaf c0(f.space_ptr(), c0_stalks, c0_rest);

    // Unit: a germ goes to the family of its restrictions over U_p.
    std::vector<GroupHom> unit_maps;
    for (std::size_t p = 0; p < n; ++p) {
        IntMatrix m(c0_stalks[p].gens(), f.stalk(p).gens());
        for (std::size_t bi = 0; bi < layout[p].pts.size(); ++bi) {
            IntMatrix r = f.restriction(p, layout[p].pts[bi]).matrix();
            for (std::size_t i = 0; i < r.rows(); ++i)
                for (std::size_t j = 0; j < r.cols(); ++j)
                    m.at(layout[p].offsets[bi] + i, j) = r.at(i, j);
        }
        unit_maps.push_back(GroupHom(f.stalk(p), c0_stalks[p], m));
    }
    SheafHom unit(f, c0, unit_maps);

    // Quotient: stalkwise cokernel; it reuses the C0 generators, so the
    // induced restrictions are the C0 restriction matrices.
    std::vector<FpGroup> q_stalks;
    for (std::size_t p = 0; p < n; ++p) {
        HomParts parts = hom_parts(unit_maps[p]);
        q_stalks.push_back(parts.cokernel);
    }
    std::map<std::pair<std::size_t, std::size_t>, GroupHom> q_rest;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            if (x.strictly_less(q, p))
                q_rest.emplace(std::make_pair(p, q),
                               GroupHom(q_stalks[p], q_stalks[q], c0.restriction(p, q).matrix()));
    Sheaf quotient(f.space_ptr(), q_stalks, q_rest);

    std::vector<GroupHom> proj_maps;
    for (std::size_t p = 0; p < n; ++p)
        proj_maps.push_back(GroupHom(c0_stalks[p], q_stalks[p], IntMatrix::identity(c0_stalks[p].gens())));
    SheafHom projection(c0, quotient, proj_maps);

    return GodementStep{f, c0, unit, quotient, projection};
}

GodementStepHom godement_step_hom(const GodementStep& sf, const GodementStep& sg,
                                  const SheafHom& phi) {
    const FiniteSpace& x = phi.source().space();
    const std::size_t n = x.size();

    std::vector<GroupHom> c0_maps;
    for (std::size_t p = 0; p < n; ++p) {
        ProductLayout lf(sf.input, x.minimal_open(p));
        ProductLayout lg(sg.input, x.minimal_open(p));
        IntMatrix m(sg.c0.stalk(p).gens(), sf.c0.stalk(p).gens());
        for (std::size_t bi = 0; bi < lf.pts.size(); ++bi) {
            std::size_t r = lf.pts[bi];
            const IntMatrix& comp = phi.stalk_map(r).matrix();
            std::size_t dst_off = lg.offset_of(r);
            for (std::size_t i = 0; i < comp.rows(); ++i)
                for (std::size_t j = 0; j < comp.cols(); ++j)
                    m.at(dst_off + i, lf.offsets[bi] + j) = comp.at(i, j);
        }
        c0_maps.push_back(GroupHom(sf.c0.stalk(p), sg.c0.stalk(p), m));
    }
    SheafHom c0_map(sf.c0, sg.c0, c0_maps);

    // Quotient stalks share the C0 generators; the same matrices induce the
    // map on cokernels.
    std::vector<GroupHom> q_maps;
    for (std::size_t p = 0; p < n; ++p)
        q_maps.push_back(GroupHom(sf.quotient.stalk(p), sg.quotient.stalk(p), c0_maps[p].matrix()));
    SheafHom q_map(sf.quotient, sg.quotient, q_maps);

    return GodementStepHom{std::move(c0_map), std::move(q_map)};
}

Resolution godement_resolution(const Sheaf& f, std::size_t kmax) {
    std::vector<GodementStep> steps;
    std::vector<Sheaf> terms;
    Sheaf current = f;
    for (std::size_t k = 0; k <= kmax + 1; ++k) {
        steps.push_back(godement_step(current));
        terms.push_back(steps.back().c0);
        current = steps.back().quotient;
    }
    SheafHom augmentation = steps[0].unit;
    std::vector<SheafHom> diffs;
    for (std::size_t k = 0; k + 1 <= kmax + 1; ++k)
        diffs.push_back(steps[k + 1].unit.compose_after(steps[k].projection));
    return Resolution{f, std::move(steps), std::move(terms), std::move(augmentation), std::move(diffs)};
}

std::vector<SheafHom> godement_hom_tower(const Resolution& rf, const Resolution& rg,
                                         const SheafHom& phi) {
    std::size_t count = std::min(rf.terms.size(), rg.terms.size());
    std::vector<SheafHom> tower;
    SheafHom level = phi;
    for (std::size_t k = 0; k < count; ++k) {
        GodementStepHom sh = godement_step_hom(rf.steps[k], rg.steps[k], level);
        tower.push_back(sh.c0_map);
        level = sh.quotient_map;
    }
    return tower;
}

bool is_flasque(const Sheaf& f, std::size_t cap) {
    const FiniteSpace& x = f.space();
    SectionData global = sections(f, x.whole());
    for (FiniteSpace::Mask u : x.enumerate_opens(cap)) {
        if (u == x.whole()) continue;
        SectionData sd = sections(f, u);
        GroupHom rho = section_restriction(f, global, sd);
        if (!hom_parts(rho).cokernel.is_trivial()) return false;
    }
    return true;
}

std::vector<FpGroup> sheaf_cohomology(const Sheaf& f, std::size_t kmax) {
    Resolution res = godement_resolution(f, kmax);
    const FiniteSpace::Mask whole = f.space().whole();

    std::vector<SectionData> gamma;
    for (const Sheaf& term : res.terms) gamma.push_back(sections(term, whole));
    std::vector<GroupHom> d;
    for (std::size_t k = 0; k < res.differentials.size(); ++k)
        d.push_back(section_hom(res.differentials[k], gamma[k], gamma[k + 1]));

    std::vector<FpGroup> h;
    for (std::size_t k = 0; k <= kmax; ++k) {
        GroupHom in = (k == 0) ? GroupHom::zero(FpGroup::trivial(), gamma[0].group) : d[k - 1];
        h.push_back(cohomology_at(in, d[k]).group);
    }
    return h;
}

std::vector<FpGroup> lim_higher_oracle(const Sheaf& f, std::size_t kmax) {
    const FiniteSpace& x = f.space();

    // Terms and per-chain offsets, degrees 0..kmax+1.
    std::vector<std::vector<std::vector<std::size_t>>> chains;
    std::vector<FpGroup> terms;
    std::vector<std::vector<std::size_t>> offsets;
    for (std::size_t k = 0; k <= kmax + 1; ++k) {
        chains.push_back(x.chains(k));
        std::vector<FpGroup> parts;
        std::vector<std::size_t> offs;
        std::size_t total = 0;
        for (const auto& c : chains[k]) {
            offs.push_back(total);
            parts.push_back(f.stalk(c[0]));
            total += f.stalk(c[0]).gens();
        }
        terms.push_back(direct_sum(parts));
        offsets.push_back(std::move(offs));
    }

    auto chain_index = [&](std::size_t k, const std::vector<std::size_t>& c) -> std::size_t {
        for (std::size_t i = 0; i < chains[k].size(); ++i)
            if (chains[k][i] == c) return i;
        throw std::logic_error("oracle: face chain not found");
    };

    std::vector<GroupHom> d;
    for (std::size_t k = 0; k + 1 <= kmax + 1; ++k) {
        IntMatrix m(terms[k + 1].gens(), terms[k].gens());
        for (std::size_t ci = 0; ci < chains[k + 1].size(); ++ci) {
            const auto& c = chains[k + 1][ci];
            for (std::size_t face = 0; face < c.size(); ++face) {
                std::vector<std::size_t> sub;
                for (std::size_t i = 0; i < c.size(); ++i)
                    if (i != face) sub.push_back(c[i]);
                std::size_t si = chain_index(k, sub);
                int sign = (face % 2 == 0) ? 1 : -1;
                if (face == 0) {
                    // face drops p_0: restrict the value at the subchain's
                    // head p_1 down to p_0
                    IntMatrix r = f.restriction(c[1], c[0]).matrix();
                    for (std::size_t i = 0; i < r.rows(); ++i)
                        for (std::size_t j = 0; j < r.cols(); ++j)
                            m.at(offsets[k + 1][ci] + i, offsets[k][si] + j) += sign * r.at(i, j);
                } else {
                    std::size_t len = f.stalk(c[0]).gens();
                    for (std::size_t i = 0; i < len; ++i)
                        m.at(offsets[k + 1][ci] + i, offsets[k][si] + i) += sign;
                }
            }
        }
        d.push_back(GroupHom(terms[k], terms[k + 1], m));
    }

    std::vector<FpGroup> h;
    for (std::size_t k = 0; k <= kmax; ++k) {
        GroupHom in = (k == 0) ? GroupHom::zero(FpGroup::trivial(), terms[0]) : d[k - 1];
        h.push_back(cohomology_at(in, d[k]).group);
    }
    return h;
}

PartitionReport verify_partition_of_unity(const Sheaf& f,
                                          const std::vector<FiniteSpace::Mask>& cover,
                                          const std::vector<SheafHom>& etas) {
    const FiniteSpace& x = f.space();
    if (cover.size() != etas.size())
        fail(ErrorKind::NotACover, "one endomorphism required per cover member");
    FiniteSpace::Mask un = 0;
    for (FiniteSpace::Mask c : cover) {
        if (!x.is_open(c)) fail(ErrorKind::NotACover, "cover member is not open");
        un |= c;
    }
    if (un != x.whole()) fail(ErrorKind::NotACover, "cover does not cover the space");
    for (const SheafHom& eta : etas)
        if (!(eta.source() == f) || !(eta.target() == f))
            fail(ErrorKind::NaturalityViolation, "eta is not an endomorphism of the sheaf");

    PartitionReport rep;
    rep.supports_ok = true;
    for (std::size_t a = 0; a < etas.size(); ++a) {
        FiniteSpace::Mask supp = 0;
        for (std::size_t p = 0; p < x.size(); ++p)
            if (!etas[a].stalk_map(p).is_zero_hom()) supp |= FiniteSpace::bit(p);
        if ((supp & cover[a]) != supp) {
            rep.supports_ok = false;
            rep.detail += "supp eta_" + std::to_string(a) + " = " + x.mask_to_string(supp) +
                          " escapes " + x.mask_to_string(cover[a]) + "; ";
        }
    }
    rep.sums_ok = true;
    for (std::size_t p = 0; p < x.size(); ++p) {
        IntMatrix sum(f.stalk(p).gens(), f.stalk(p).gens());
        for (const SheafHom& eta : etas) sum = sum + eta.stalk_map(p).matrix();
        GroupHom total(f.stalk(p), f.stalk(p), sum);
        if (!total.equal_mod_relations(GroupHom::identity(f.stalk(p)))) {
            rep.sums_ok = false;
            rep.detail += "stalk maps at " + x.point_name(p) + " do not sum to the identity; ";
        }
    }
    rep.valid = rep.supports_ok && rep.sums_ok;
    return rep;
}

} // namespace finsheaf
