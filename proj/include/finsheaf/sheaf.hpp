#pragma once

#include <map>
#include <memory>
#include <vector>

#include "finsheaf/finspace.hpp"
#include "finsheaf/group.hpp"

namespace finsheaf {

using SpacePtr = std::shared_ptr<const FiniteSpace>;

// A sheaf on a finite space is a functor on the specialization order: one
// stalk per point and a restriction hom stalk(p) -> stalk(q) for q <= p.
// Its section groups then satisfy both sheaf axioms automatically.
class Sheaf {
public:
    // restrictions may cover any generating set of pairs (e.g. the Hasse
    // edges); missing composites are derived and functoriality is validated
    // on every comparable triple.
    Sheaf(SpacePtr space, std::vector<FpGroup> stalks,
          const std::map<std::pair<std::size_t, std::size_t>, GroupHom>& restrictions);

    const FiniteSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }
    const FpGroup& stalk(std::size_t p) const { return stalks_[p]; }
    std::size_t points() const { return stalks_.size(); }

    // q <= p required; identity when q == p.
    GroupHom restriction(std::size_t p, std::size_t q) const;

    bool operator==(const Sheaf& o) const;

private:
    SpacePtr space_;
    std::vector<FpGroup> stalks_;
    std::map<std::pair<std::size_t, std::size_t>, GroupHom> restrict_; // key (p, q), q < p
};

class SheafHom {
public:
    // Validates naturality with the restrictions on every comparable pair.
    SheafHom(Sheaf source, Sheaf target, std::vector<GroupHom> stalk_maps);

    static SheafHom identity(const Sheaf& f);
    static SheafHom zero(const Sheaf& source, const Sheaf& target);

    const Sheaf& source() const { return source_; }
    const Sheaf& target() const { return target_; }
    const GroupHom& stalk_map(std::size_t p) const { return maps_[p]; }

    SheafHom compose_after(const SheafHom& inner) const;

private:
    Sheaf source_, target_;
    std::vector<GroupHom> maps_;
};

// Sections over an open set: the group of compatible families in the product
// of the stalks, kept with its ambient presentation so maps between section
// groups can be solved for exactly.
struct SectionData {
    FpGroup group;
    FiniteSpace::Mask open = 0;
    std::vector<std::size_t> pts;     // points of the open, increasing
    std::vector<std::size_t> offsets; // generator offset of each point's block
    std::size_t product_gens = 0;
    IntMatrix family_basis;           // product_gens x group.gens
    IntMatrix product_relations;      // product_gens x r (column lattice)

    GroupHom projection(const Sheaf& f, std::size_t p) const;
};

SectionData sections(const Sheaf& f, FiniteSpace::Mask open);

// Gamma(U, phi): the map induced on section groups by a sheaf morphism.
GroupHom section_hom(const SheafHom& phi, const SectionData& src, const SectionData& dst);

// Gamma(V, F) -> Gamma(U, F) for U inside V.
GroupHom section_restriction(const Sheaf& f, const SectionData& big, const SectionData& small);

// -- Builders ---------------------------------------------------------------

Sheaf constant_sheaf(const SpacePtr& space, const FpGroup& g);
// Support is the closure of {p} (the up-set of p under the order); stalk g on
// the support with identity restrictions, zero outside.
Sheaf skyscraper(const SpacePtr& space, std::size_t p, const FpGroup& g);
Sheaf zero_sheaf(const SpacePtr& space);

// -- Kernel / image / quotient ----------------------------------------------

struct SheafHomParts {
    Sheaf kernel;
    Sheaf image;
    Sheaf quotient; // target / image
    SheafHom kernel_inclusion;
    SheafHom image_inclusion;
    SheafHom quotient_projection; // target -> quotient
    bool is_injective;
    bool is_surjective;
};
SheafHomParts sheaf_hom_parts(const SheafHom& phi);

// -- Exactness --------------------------------------------------------------

struct ExactnessReport {
    bool exact = true;
    // failing (interior position, point) pairs; position i sits between
    // maps[i-1] and maps[i]
    std::vector<std::pair<std::size_t, std::size_t>> failures;
};
// Checks stalkwise exactness at every interior position of the composable
// chain maps[0], maps[1], ...
ExactnessReport is_exact_sequence(const std::vector<SheafHom>& maps);

struct LeftExactnessReport {
    bool left_exact = false;     // 0 -> E(U) -> F(U) -> G(U) exact
    bool surjective = false;     // F(U) -> G(U) onto?
    FpGroup cokernel;            // of F(U) -> G(U)
};
// first: E -> F, second: F -> G; the pair must form a short exact sequence.
LeftExactnessReport sections_left_exactness(const SheafHom& first, const SheafHom& second,
                                            FiniteSpace::Mask open);

} // namespace finsheaf
