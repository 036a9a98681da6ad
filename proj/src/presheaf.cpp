#include "finsheaf/presheaf.hpp"

namespace finsheaf {

PresheafTable::PresheafTable(SpacePtr space, std::map<Mask, FpGroup> groups,
                             std::map<std::pair<Mask, Mask>, GroupHom> restrictions,
                             std::size_t cap)
    : space_(std::move(space)), groups_(std::move(groups)), restrict_(std::move(restrictions)) {
    opens_ = space_->enumerate_opens(cap);
    for (Mask u : opens_)
        if (!groups_.count(u))
            fail(ErrorKind::MissingRestriction,
                 "presheaf table missing a group for open " + space_->mask_to_string(u));
    for (Mask u : opens_)
        for (Mask v : opens_) {
            if ((v & u) != v || v == u) continue;
            auto it = restrict_.find({u, v});
            if (it == restrict_.end())
                fail(ErrorKind::MissingRestriction,
                     "presheaf table missing the restriction " + space_->mask_to_string(u) + " -> " +
                         space_->mask_to_string(v));
            if (!(it->second.source() == groups_.at(u)) || !(it->second.target() == groups_.at(v)))
                fail(ErrorKind::MissingRestriction, "restriction endpoints disagree with the table");
        }
    // transitivity: for W in V in U the two routes agree
    for (Mask u : opens_)
        for (Mask v : opens_) {
            if ((v & u) != v || v == u) continue;
            for (Mask w : opens_) {
                if ((w & v) != w || w == v) continue;
                GroupHom two_step = restriction(v, w).compose_after(restriction(u, v));
                if (!two_step.equal_mod_relations(restriction(u, w)))
                    fail(ErrorKind::FunctorialityViolation,
                         "table restrictions disagree along " + space_->mask_to_string(w) + " in " +
                             space_->mask_to_string(v) + " in " + space_->mask_to_string(u));
            }
        }
}

const FpGroup& PresheafTable::group(Mask u) const {
    auto it = groups_.find(u);
    if (it == groups_.end()) fail(ErrorKind::NotOpen, "no group stored for this open set");
    return it->second;
}

GroupHom PresheafTable::restriction(Mask u, Mask v) const {
    if (u == v) return GroupHom::identity(group(u));
    auto it = restrict_.find({u, v});
    if (it == restrict_.end()) fail(ErrorKind::NotOpen, "no restriction stored for this pair");
    return it->second;
}

FpGroup stalk_of_table(const PresheafTable& table, std::size_t p) {
    if (p >= table.space().size()) fail(ErrorKind::UnknownPoint, "stalk_of_table: point out of range");
    return table.group(table.space().minimal_open(p));
}

Sheafification sheafify(const PresheafTable& table) {
    const FiniteSpace& x = table.space();
    const std::size_t n = x.size();
    std::vector<FpGroup> stalks;
    for (std::size_t p = 0; p < n; ++p) stalks.push_back(table.group(x.minimal_open(p)));
    std::map<std::pair<std::size_t, std::size_t>, GroupHom> rest;
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            if (x.strictly_less(q, p))
                rest.emplace(std::make_pair(p, q),
                             table.restriction(x.minimal_open(p), x.minimal_open(q)));
    Sheafification out{Sheaf(table.space_ptr(), std::move(stalks), rest), {}, {}};

    for (FiniteSpace::Mask u : table.opens()) {
        SectionData sd = sections(out.sheaf, u);
        // theta: restrict to each minimal open, giving a compatible family.
        IntMatrix image(sd.product_gens, table.group(u).gens());
        for (std::size_t b = 0; b < sd.pts.size(); ++b) {
            IntMatrix m = table.restriction(u, x.minimal_open(sd.pts[b])).matrix();
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j)
                    image.at(sd.offsets[b] + i, j) = m.at(i, j);
        }
        IntMatrix lat = sd.family_basis.hstack(sd.product_relations);
        auto sol = lattice_solve_all(lat, image);
        if (!sol) throw std::logic_error("sheafify: unit image is not a compatible family");
        GroupHom theta(table.group(u), sd.group,
                       sol->submatrix(0, 0, sd.family_basis.cols(), image.cols()));
        out.unit.emplace(u, std::move(theta));
        out.section_data.emplace(u, std::move(sd));
    }
    return out;
}

AxiomReport check_sheaf_axioms(const PresheafTable& table, FiniteSpace::Mask u,
                               const std::vector<FiniteSpace::Mask>& cover) {
    const FiniteSpace& x = table.space();
    FiniteSpace::Mask un = 0;
    for (FiniteSpace::Mask c : cover) {
        if (!x.is_open(c)) fail(ErrorKind::NotACover, "cover member is not open");
        if ((c & u) != c) fail(ErrorKind::NotACover, "cover member is not inside the open set");
        un |= c;
    }
    if (un != u) fail(ErrorKind::NotACover, "cover does not cover the open set");

    // r : P(U) -> prod_i P(U_i)
    std::vector<FpGroup> parts0;
    for (FiniteSpace::Mask c : cover) parts0.push_back(table.group(c));
    FpGroup prod0 = direct_sum(parts0);
    IntMatrix rmat(prod0.gens(), table.group(u).gens());
    {
        std::size_t off = 0;
        for (FiniteSpace::Mask c : cover) {
            IntMatrix m = table.restriction(u, c).matrix();
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j)
                    rmat.at(off + i, j) = m.at(i, j);
            off += table.group(c).gens();
        }
    }
    GroupHom r(table.group(u), prod0, rmat);

    // delta : prod_i P(U_i) -> prod_{i<j} P(U_i n U_j),
    // (delta w)_{ij} = w_j|_{U_ij} - w_i|_{U_ij}
    std::vector<FpGroup> parts1;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < cover.size(); ++i)
        for (std::size_t j = i + 1; j < cover.size(); ++j) {
            parts1.push_back(table.group(cover[i] & cover[j]));
            pairs.emplace_back(i, j);
        }
    FpGroup prod1 = direct_sum(parts1);
    IntMatrix dmat(prod1.gens(), prod0.gens());
    {
        std::vector<std::size_t> off0(cover.size());
        std::size_t acc = 0;
        for (std::size_t i = 0; i < cover.size(); ++i) {
            off0[i] = acc;
            acc += table.group(cover[i]).gens();
        }
        std::size_t off1 = 0;
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            auto [i, j] = pairs[k];
            FiniteSpace::Mask uij = cover[i] & cover[j];
            IntMatrix mj = table.restriction(cover[j], uij).matrix();
            IntMatrix mi = table.restriction(cover[i], uij).matrix();
            for (std::size_t a = 0; a < mj.rows(); ++a)
                for (std::size_t b = 0; b < mj.cols(); ++b)
                    dmat.at(off1 + a, off0[j] + b) += mj.at(a, b);
            for (std::size_t a = 0; a < mi.rows(); ++a)
                for (std::size_t b = 0; b < mi.cols(); ++b)
                    dmat.at(off1 + a, off0[i] + b) -= mi.at(a, b);
            off1 += table.group(uij).gens();
        }
    }
    GroupHom delta(prod0, prod1, dmat);

    AxiomReport rep;
    rep.uniqueness = hom_parts(r).kernel.is_trivial();
    rep.gluing = cohomology_at(r, delta).group.is_trivial();
    return rep;
}

PresheafTable table_of_sheaf(const Sheaf& f, std::size_t cap) {
    const FiniteSpace& x = f.space();
    std::map<FiniteSpace::Mask, FpGroup> groups;
    std::map<FiniteSpace::Mask, SectionData> data;
    for (FiniteSpace::Mask u : x.enumerate_opens(cap)) {
        SectionData sd = sections(f, u);
        groups.emplace(u, sd.group);
        data.emplace(u, std::move(sd));
    }
    std::map<std::pair<FiniteSpace::Mask, FiniteSpace::Mask>, GroupHom> rest;
    for (const auto& [u, sdu] : data)
        for (const auto& [v, sdv] : data)
            if ((v & u) == v && v != u)
                rest.emplace(std::make_pair(u, v), section_restriction(f, sdu, sdv));
    return PresheafTable(f.space_ptr(), std::move(groups), std::move(rest), cap);
}

PresheafTable constant_functions_table(const SpacePtr& space, const FpGroup& g, std::size_t cap) {
    std::map<FiniteSpace::Mask, FpGroup> groups;
    std::map<std::pair<FiniteSpace::Mask, FiniteSpace::Mask>, GroupHom> rest;
    auto opens = space->enumerate_opens(cap);
    for (FiniteSpace::Mask u : opens) groups.emplace(u, u == 0 ? FpGroup::trivial() : g);
    for (FiniteSpace::Mask u : opens)
        for (FiniteSpace::Mask v : opens) {
            if ((v & u) != v || v == u) continue;
            if (v == 0)
                rest.emplace(std::make_pair(u, v), GroupHom::zero(groups.at(u), FpGroup::trivial()));
            else
                rest.emplace(std::make_pair(u, v), GroupHom::identity(g));
        }
    return PresheafTable(space, std::move(groups), std::move(rest), cap);
}

PresheafTable global_only_table(const SpacePtr& space, const FpGroup& g, std::size_t cap) {
    std::map<FiniteSpace::Mask, FpGroup> groups;
    std::map<std::pair<FiniteSpace::Mask, FiniteSpace::Mask>, GroupHom> rest;
    auto opens = space->enumerate_opens(cap);
    FiniteSpace::Mask whole = space->whole();
    for (FiniteSpace::Mask u : opens) groups.emplace(u, u == whole ? g : FpGroup::trivial());
    for (FiniteSpace::Mask u : opens)
        for (FiniteSpace::Mask v : opens)
            if ((v & u) == v && v != u)
                rest.emplace(std::make_pair(u, v), GroupHom::zero(groups.at(u), groups.at(v)));
    return PresheafTable(space, std::move(groups), std::move(rest), cap);
}

PresheafTable zero_table(const SpacePtr& space, std::size_t cap) {
    return global_only_table(space, FpGroup::trivial(), cap);
}

} // namespace finsheaf
