#pragma once

#include "finsheaf/sheaf.hpp"

namespace finsheaf {

// Presheaf given as an explicit table on every open set (under the
// enumeration cap). Only used for axiom checking, stalks-as-limits, and
// sheafification demos; sheaves proper live as stalk functors.
class PresheafTable {
public:
    using Mask = FiniteSpace::Mask;

    PresheafTable(SpacePtr space, std::map<Mask, FpGroup> groups,
                  std::map<std::pair<Mask, Mask>, GroupHom> restrictions,
                  std::size_t cap = 4096);

    const FiniteSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }
    const std::vector<Mask>& opens() const { return opens_; }
    const FpGroup& group(Mask u) const;
    // V inside U; identity when equal.
    GroupHom restriction(Mask u, Mask v) const;

private:
    SpacePtr space_;
    std::vector<Mask> opens_;
    std::map<Mask, FpGroup> groups_;
    std::map<std::pair<Mask, Mask>, GroupHom> restrict_;
};

// The direct limit over opens containing p; attained at the minimal open.
FpGroup stalk_of_table(const PresheafTable& table, std::size_t p);

struct Sheafification {
    Sheaf sheaf;
    // theta_U : P(U) -> Gamma(U, sheaf) for every open U of the table
    std::map<FiniteSpace::Mask, GroupHom> unit;
    std::map<FiniteSpace::Mask, SectionData> section_data;
};
Sheafification sheafify(const PresheafTable& table);

struct AxiomReport {
    bool uniqueness = false; // r : P(U) -> prod P(U_i) injective
    bool gluing = false;     // ker(delta) = im(r)
};
AxiomReport check_sheaf_axioms(const PresheafTable& table, FiniteSpace::Mask u,
                               const std::vector<FiniteSpace::Mask>& cover);

// The table of a stalk-functor sheaf: P(U) = Gamma(U, F). Always a sheaf;
// handy as a corpus member and for exercising the axiom checker.
PresheafTable table_of_sheaf(const Sheaf& f, std::size_t cap = 4096);

// Presheaf of "globally constant" functions valued in g: P(U) = g for each
// nonempty U, identity restrictions. Fails gluing on disconnected opens.
PresheafTable constant_functions_table(const SpacePtr& space, const FpGroup& g, std::size_t cap = 4096);

// P(whole space) = g, zero elsewhere: all stalks vanish on spaces where some
// proper open contains each point.
PresheafTable global_only_table(const SpacePtr& space, const FpGroup& g, std::size_t cap = 4096);

PresheafTable zero_table(const SpacePtr& space, std::size_t cap = 4096);

} // namespace finsheaf
