#include "finsheaf/sheaf.hpp"

#include <algorithm>

namespace finsheaf {

Sheaf::Sheaf(SpacePtr space, std::vector<FpGroup> stalks,
             const std::map<std::pair<std::size_t, std::size_t>, GroupHom>& restrictions)
    : space_(std::move(space)), stalks_(std::move(stalks)) {
    const FiniteSpace& x = *space_;
    const std::size_t n = x.size();
    if (stalks_.size() != n)
        fail(ErrorKind::MissingRestriction, "stalk count does not match the space");

    for (const auto& [key, hom] : restrictions) {
        auto [p, q] = key;
        if (p >= n || q >= n) fail(ErrorKind::UnknownPoint, "restriction names an unknown point");
        if (!x.strictly_less(q, p))
            fail(ErrorKind::MissingRestriction,
                 "restriction given for a non-comparable pair (" + x.point_name(p) + "," + x.point_name(q) + ")");
        if (!(hom.source() == stalks_[p]) || !(hom.target() == stalks_[q]))
            fail(ErrorKind::MissingRestriction,
                 "restriction endpoints disagree with the stalks at (" + x.point_name(p) + "," + x.point_name(q) + ")");
        restrict_.emplace(key, hom);
    }

    // Derive missing composites through intermediate points until stable.
    for (;;) {
        bool progress = false;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                if (!x.strictly_less(q, p) || restrict_.count({p, q})) continue;
                for (std::size_t m = 0; m < n; ++m) {
                    if (!x.strictly_less(q, m) || !x.strictly_less(m, p)) continue;
                    auto up = restrict_.find({p, m});
                    auto dn = restrict_.find({m, q});
                    if (up == restrict_.end() || dn == restrict_.end()) continue;
                    restrict_.emplace(std::make_pair(p, q), dn->second.compose_after(up->second));
                    progress = true;
                    break;
                }
            }
        if (!progress) break;
    }
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            if (x.strictly_less(q, p) && !restrict_.count({p, q}))
                fail(ErrorKind::MissingRestriction,
                     "no restriction derivable for (" + x.point_name(p) + "," + x.point_name(q) + ")");

    // Functoriality on all comparable triples r < q < p.
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            if (!x.strictly_less(q, p)) continue;
            for (std::size_t r = 0; r < n; ++r) {
                if (!x.strictly_less(r, q)) continue;
                GroupHom composite = restrict_.at({q, r}).compose_after(restrict_.at({p, q}));
                if (!composite.equal_mod_relations(restrict_.at({p, r})))
                    fail(ErrorKind::FunctorialityViolation,
                         "restrictions disagree along " + x.point_name(r) + " <= " + x.point_name(q) +
                             " <= " + x.point_name(p));
            }
        }
}

GroupHom Sheaf::restriction(std::size_t p, std::size_t q) const {
    if (p == q) return GroupHom::identity(stalks_[p]);
    auto it = restrict_.find({p, q});
    if (it == restrict_.end())
        fail(ErrorKind::MissingRestriction, "restriction requested for a non-comparable pair");
    return it->second;
}

bool Sheaf::operator==(const Sheaf& o) const {
    if (!(*space_ == *o.space_) || stalks_.size() != o.stalks_.size()) return false;
    for (std::size_t i = 0; i < stalks_.size(); ++i)
        if (!(stalks_[i] == o.stalks_[i])) return false;
    if (restrict_.size() != o.restrict_.size()) return false;
    for (const auto& [key, hom] : restrict_) {
        auto it = o.restrict_.find(key);
        if (it == o.restrict_.end() || !(hom.matrix() == it->second.matrix())) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------

SheafHom::SheafHom(Sheaf source, Sheaf target, std::vector<GroupHom> stalk_maps)
    : source_(std::move(source)), target_(std::move(target)), maps_(std::move(stalk_maps)) {
    const FiniteSpace& x = source_.space();
    if (!(x == target_.space()))
        fail(ErrorKind::NaturalityViolation, "source and target live on different spaces");
    if (maps_.size() != x.size())
        fail(ErrorKind::NaturalityViolation, "one stalk map required per point");
    for (std::size_t p = 0; p < x.size(); ++p)
        if (!(maps_[p].source() == source_.stalk(p)) || !(maps_[p].target() == target_.stalk(p)))
            fail(ErrorKind::NaturalityViolation, "stalk map endpoints disagree at " + x.point_name(p));
    for (std::size_t p = 0; p < x.size(); ++p)
        for (std::size_t q = 0; q < x.size(); ++q) {
            if (!x.strictly_less(q, p)) continue;
            GroupHom via_source = maps_[q].compose_after(source_.restriction(p, q));
            GroupHom via_target = target_.restriction(p, q).compose_after(maps_[p]);
            if (!via_source.equal_mod_relations(via_target))
                fail(ErrorKind::NaturalityViolation,
                     "square fails to commute for " + x.point_name(q) + " <= " + x.point_name(p));
        }
}

SheafHom SheafHom::identity(const Sheaf& f) {
    std::vector<GroupHom> maps;
    for (std::size_t p = 0; p < f.points(); ++p) maps.push_back(GroupHom::identity(f.stalk(p)));
    return SheafHom(f, f, std::move(maps));
}

SheafHom SheafHom::zero(const Sheaf& source, const Sheaf& target) {
    std::vector<GroupHom> maps;
    for (std::size_t p = 0; p < source.points(); ++p)
        maps.push_back(GroupHom::zero(source.stalk(p), target.stalk(p)));
    return SheafHom(source, target, std::move(maps));
}

SheafHom SheafHom::compose_after(const SheafHom& inner) const {
    if (!(inner.target_ == source_))
        fail(ErrorKind::ChainMismatch, "sheaf hom composition endpoints disagree");
    std::vector<GroupHom> maps;
    for (std::size_t p = 0; p < maps_.size(); ++p)
        maps.push_back(maps_[p].compose_after(inner.maps_[p]));
    return SheafHom(inner.source_, target_, std::move(maps));
}

// ---------------------------------------------------------------------------

SectionData sections(const Sheaf& f, FiniteSpace::Mask open) {
    const FiniteSpace& x = f.space();
    if (!x.is_open(open)) fail(ErrorKind::NotOpen, x.mask_to_string(open) + " is not open");

    SectionData sd;
    sd.open = open;
    sd.pts = x.mask_points(open);
    std::size_t total = 0;
    std::vector<FpGroup> parts;
    for (std::size_t p : sd.pts) {
        sd.offsets.push_back(total);
        total += f.stalk(p).gens();
        parts.push_back(f.stalk(p));
    }
    sd.product_gens = total;
    FpGroup product = direct_sum(parts);
    sd.product_relations = product.relation_cols();

    auto block_of = [&](std::size_t p) -> std::size_t {
        for (std::size_t i = 0; i < sd.pts.size(); ++i)
            if (sd.pts[i] == p) return i;
        throw std::logic_error("sections: point not in open");
    };

    // Compatibility constraints: restrict(q <= p)(s_p) - s_q = 0 in stalk(q).
    std::vector<FpGroup> cparts;
    std::vector<IntMatrix> crows;
    for (std::size_t bp = 0; bp < sd.pts.size(); ++bp)
        for (std::size_t bq = 0; bq < sd.pts.size(); ++bq) {
            std::size_t p = sd.pts[bp], q = sd.pts[bq];
            if (!x.strictly_less(q, p)) continue;
            const FpGroup& tq = f.stalk(q);
            IntMatrix row(tq.gens(), total);
            IntMatrix r = f.restriction(p, q).matrix();
            for (std::size_t i = 0; i < r.rows(); ++i)
                for (std::size_t j = 0; j < r.cols(); ++j)
                    row.at(i, sd.offsets[bp] + j) = r.at(i, j);
            for (std::size_t i = 0; i < tq.gens(); ++i)
                row.at(i, sd.offsets[block_of(q)] + i) -= 1;
            cparts.push_back(tq);
            crows.push_back(std::move(row));
        }

    IntMatrix constraint(0, total);
    for (const auto& r : crows) constraint = constraint.vstack(r);
    FpGroup ctarget = direct_sum(cparts);

    // Families with all constraints vanishing modulo the stalk relations.
    IntMatrix ker_xz = kernel_basis(constraint.hstack(ctarget.relation_cols().negated()));
    IntMatrix ker_x = ker_xz.submatrix(0, 0, total, ker_xz.cols());
    Presented pres = subquotient(total, lattice_basis(ker_x.hstack(sd.product_relations)),
                                 sd.product_relations);
    sd.group = pres.group;
    sd.family_basis = pres.num;
    return sd;
}

GroupHom SectionData::projection(const Sheaf& f, std::size_t p) const {
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i] == p) {
            IntMatrix block = family_basis.submatrix(offsets[i], 0, f.stalk(p).gens(), family_basis.cols());
            return GroupHom(group, f.stalk(p), block);
        }
    fail(ErrorKind::UnknownPoint, "projection: point not in the open set");
}

namespace {

// Solve columns of image in the destination compatible-family lattice
// (family basis extended by the product relations).
GroupHom solve_into_sections(const FpGroup& src_group, const SectionData& dst,
                             const IntMatrix& image_cols) {
    IntMatrix lat = dst.family_basis.hstack(dst.product_relations);
    auto sol = lattice_solve_all(lat, image_cols);
    if (!sol) throw std::logic_error("induced section map does not preserve compatibility");
    IntMatrix coords = sol->submatrix(0, 0, dst.family_basis.cols(), image_cols.cols());
    return GroupHom(src_group, dst.group, coords);
}

} // namespace

GroupHom section_hom(const SheafHom& phi, const SectionData& src, const SectionData& dst) {
    // Blockwise stalk maps applied to each basis family.
    IntMatrix image(dst.product_gens, src.family_basis.cols());
    for (std::size_t b = 0; b < src.pts.size(); ++b) {
        std::size_t p = src.pts[b];
        const IntMatrix& m = phi.stalk_map(p).matrix();
        // locate p in dst
        std::size_t db = 0;
        while (db < dst.pts.size() && dst.pts[db] != p) ++db;
        if (db == dst.pts.size()) throw std::logic_error("section_hom: opens disagree");
        for (std::size_t c = 0; c < src.family_basis.cols(); ++c)
            for (std::size_t i = 0; i < m.rows(); ++i) {
                Int acc = 0;
                for (std::size_t j = 0; j < m.cols(); ++j)
                    acc += m.at(i, j) * src.family_basis.at(src.offsets[b] + j, c);
                image.at(dst.offsets[db] + i, c) += acc;
            }
    }
    return solve_into_sections(src.group, dst, image);
}

GroupHom section_restriction(const Sheaf& f, const SectionData& big, const SectionData& small) {
    (void)f;
    // Drop the coordinates of points outside the smaller open.
    IntMatrix image(small.product_gens, big.family_basis.cols());
    for (std::size_t sb = 0; sb < small.pts.size(); ++sb) {
        std::size_t p = small.pts[sb];
        std::size_t bb = 0;
        while (bb < big.pts.size() && big.pts[bb] != p) ++bb;
        if (bb == big.pts.size()) fail(ErrorKind::NotOpen, "section_restriction: not a sub-open");
        std::size_t len = (sb + 1 < small.pts.size() ? small.offsets[sb + 1] : small.product_gens) - small.offsets[sb];
        for (std::size_t c = 0; c < big.family_basis.cols(); ++c)
            for (std::size_t i = 0; i < len; ++i)
                image.at(small.offsets[sb] + i, c) = big.family_basis.at(big.offsets[bb] + i, c);
    }
    return solve_into_sections(big.group, small, image);
}

// ---------------------------------------------------------------------------

Sheaf constant_sheaf(const SpacePtr& space, const FpGroup& g) {
    std::vector<FpGroup> stalks(space->size(), g);
    std::map<std::pair<std::size_t, std::size_t>, GroupHom> rest;
    for (std::size_t p = 0; p < space->size(); ++p)
        for (std::size_t q = 0; q < space->size(); ++q)
            if (space->strictly_less(q, p)) rest.emplace(std::make_pair(p, q), GroupHom::identity(g));
    return Sheaf(space, std::move(stalks), rest);
}

Sheaf skyscraper(const SpacePtr& space, std::size_t p0, const FpGroup& g) {
    if (p0 >= space->size()) fail(ErrorKind::UnknownPoint, "skyscraper point out of range");
    auto in_support = [&](std::size_t q) { return space->leq(p0, q); }; // closure of {p0}
    std::vector<FpGroup> stalks;
    for (std::size_t q = 0; q < space->size(); ++q)
        stalks.push_back(in_support(q) ? g : FpGroup::trivial());
    std::map<std::pair<std::size_t, std::size_t>, GroupHom> rest;
    for (std::size_t p = 0; p < space->size(); ++p)
        for (std::size_t q = 0; q < space->size(); ++q) {
            if (!space->strictly_less(q, p)) continue;
            if (in_support(p) && in_support(q))
                rest.emplace(std::make_pair(p, q), GroupHom::identity(g));
            else
                rest.emplace(std::make_pair(p, q), GroupHom::zero(stalks[p], stalks[q]));
        }
    return Sheaf(space, std::move(stalks), rest);
}

Sheaf zero_sheaf(const SpacePtr& space) {
    return constant_sheaf(space, FpGroup::trivial());
}

// ---------------------------------------------------------------------------

SheafHomParts sheaf_hom_parts(const SheafHom& phi) {
    const FiniteSpace& x = phi.source().space();
    const std::size_t n = x.size();

    std::vector<HomParts> parts;
    parts.reserve(n);
    for (std::size_t p = 0; p < n; ++p) parts.push_back(hom_parts(phi.stalk_map(p)));

    bool inj = true, surj = true;
    for (std::size_t p = 0; p < n; ++p) {
        inj = inj && parts[p].kernel.is_trivial();
        surj = surj && parts[p].cokernel.is_trivial();
    }

    auto induced = [&](std::size_t p, std::size_t q, const GroupHom& ambient_restriction,
                       const GroupHom& inc_p, const GroupHom& inc_q,
                       const FpGroup& gp, const FpGroup& gq) {
        // Coordinates of restriction(inc_p(gens)) in the q-side representatives.
        IntMatrix image = ambient_restriction.matrix() * inc_p.matrix();
        IntMatrix lat = inc_q.matrix().hstack(inc_q.target().relation_cols());
        auto sol = lattice_solve_all(lat, image);
        if (!sol) throw std::logic_error("induced subsheaf restriction escapes the subgroup");
        return GroupHom(gp, gq, sol->submatrix(0, 0, gq.gens(), image.cols()));
    };

    std::vector<FpGroup> ker_stalks, img_stalks, quo_stalks;
    for (std::size_t p = 0; p < n; ++p) {
        ker_stalks.push_back(parts[p].kernel);
        img_stalks.push_back(parts[p].image);
        quo_stalks.push_back(parts[p].cokernel);
    }

    std::map<std::pair<std::size_t, std::size_t>, GroupHom> ker_rest, img_rest, quo_rest;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q) {
            if (!x.strictly_less(q, p)) continue;
            GroupHom rF = phi.source().restriction(p, q);
            GroupHom rG = phi.target().restriction(p, q);
            ker_rest.emplace(std::make_pair(p, q),
                             induced(p, q, rF, parts[p].kernel_inclusion, parts[q].kernel_inclusion,
                                     parts[p].kernel, parts[q].kernel));
            img_rest.emplace(std::make_pair(p, q),
                             induced(p, q, rG, parts[p].image_inclusion, parts[q].image_inclusion,
                                     parts[p].image, parts[q].image));
            // Cokernels reuse the target generators, so the induced map is the
            // target restriction read against the larger relation lattice.
            quo_rest.emplace(std::make_pair(p, q),
                             GroupHom(parts[p].cokernel, parts[q].cokernel, rG.matrix()));
        }

    Sheaf kernel(phi.source().space_ptr(), std::move(ker_stalks), ker_rest);
    Sheaf image(phi.source().space_ptr(), std::move(img_stalks), img_rest);
    Sheaf quotient(phi.source().space_ptr(), std::move(quo_stalks), quo_rest);

    std::vector<GroupHom> ker_inc, img_inc, quo_proj;
    for (std::size_t p = 0; p < n; ++p) {
        ker_inc.push_back(GroupHom(kernel.stalk(p), phi.source().stalk(p), parts[p].kernel_inclusion.matrix()));
        img_inc.push_back(GroupHom(image.stalk(p), phi.target().stalk(p), parts[p].image_inclusion.matrix()));
        quo_proj.push_back(GroupHom(phi.target().stalk(p), quotient.stalk(p), parts[p].cokernel_projection.matrix()));
    }

    return SheafHomParts{kernel, image, quotient,
                         SheafHom(kernel, phi.source(), std::move(ker_inc)),
                         SheafHom(image, phi.target(), std::move(img_inc)),
                         SheafHom(phi.target(), quotient, std::move(quo_proj)),
                         inj, surj};
}

ExactnessReport is_exact_sequence(const std::vector<SheafHom>& maps) {
    ExactnessReport report;
    for (std::size_t i = 1; i < maps.size(); ++i)
        if (!(maps[i - 1].target() == maps[i].source()))
            fail(ErrorKind::ChainMismatch, "sequence maps are not composable at position " + std::to_string(i));
    if (maps.size() < 2) return report;
    const FiniteSpace& x = maps[0].source().space();
    for (std::size_t i = 1; i < maps.size(); ++i)
        for (std::size_t p = 0; p < x.size(); ++p) {
            Presented h = cohomology_at(maps[i - 1].stalk_map(p), maps[i].stalk_map(p));
            if (!h.group.is_trivial()) {
                report.exact = false;
                report.failures.emplace_back(i, p);
            }
        }
    return report;
}

LeftExactnessReport sections_left_exactness(const SheafHom& first, const SheafHom& second,
                                            FiniteSpace::Mask open) {
    // Verify the input really is short exact (with zero sheaves at the ends).
    Sheaf z = zero_sheaf(first.source().space_ptr());
    std::vector<SheafHom> seq;
    seq.push_back(SheafHom::zero(z, first.source()));
    seq.push_back(first);
    seq.push_back(second);
    seq.push_back(SheafHom::zero(second.target(), z));
    if (!is_exact_sequence(seq).exact)
        fail(ErrorKind::NotExactInput, "sections_left_exactness requires a short exact sequence");

    SectionData se = sections(first.source(), open);
    SectionData sf = sections(first.target(), open);
    SectionData sg = sections(second.target(), open);
    GroupHom a = section_hom(first, se, sf);
    GroupHom b = section_hom(second, sf, sg);

    LeftExactnessReport r;
    HomParts pa = hom_parts(a);
    HomParts pb = hom_parts(b);
    Presented mid = cohomology_at(a, b);
    r.left_exact = pa.kernel.is_trivial() && mid.group.is_trivial();
    r.surjective = pb.cokernel.is_trivial();
    r.cokernel = pb.cokernel;
    return r;
}

} // namespace finsheaf
