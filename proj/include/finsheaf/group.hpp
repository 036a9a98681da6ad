#pragma once

#include <string>
#include <vector>

#include "finsheaf/error.hpp"
#include "finsheaf/intmat.hpp"

namespace finsheaf {

// Finitely presented abelian group: n generators and a relation matrix whose
// rows are relations among them. Canonical invariants (rank, invariant
// factors) come from the Smith normal form and classify up to isomorphism.
class FpGroup {
public:
    FpGroup() : gens_(0), relations_(0, 0), rank_(0) {}
    FpGroup(std::size_t gens, IntMatrix relations);

    static FpGroup free(std::size_t n) { return FpGroup(n, IntMatrix(0, n)); }
    static FpGroup trivial() { return free(0); }
    static FpGroup cyclic(const Int& d); // Z/d (d = 0 gives Z)

    std::size_t gens() const { return gens_; }
    const IntMatrix& relations() const { return relations_; } // rows are relations

    std::size_t rank() const { return rank_; }
    const std::vector<Int>& torsion() const { return torsion_; }
    bool is_trivial() const { return rank_ == 0 && torsion_.empty(); }

    bool same_invariants(const FpGroup& o) const {
        return rank_ == o.rank_ && torsion_ == o.torsion_;
    }
    // structural (presentation) equality
    bool operator==(const FpGroup& o) const {
        return gens_ == o.gens_ && relations_ == o.relations_;
    }

    // Relations as a column lattice in Z^gens.
    IntMatrix relation_cols() const { return relations_.transpose(); }

    // Does v represent the zero element?
    bool element_is_zero(const Vec& v) const;

    std::string render() const; // "Z^r (+) Z/d1 (+) ..." from invariants

private:
    std::size_t gens_;
    IntMatrix relations_;
    std::size_t rank_;
    std::vector<Int> torsion_;
};

FpGroup direct_sum(const std::vector<FpGroup>& parts);

// Homomorphism of FpGroups given on generators; the constructor checks that
// every source relation maps into the target's relation lattice.
class GroupHom {
public:
    GroupHom(FpGroup source, FpGroup target, IntMatrix matrix);

    static GroupHom identity(const FpGroup& g);
    static GroupHom zero(const FpGroup& source, const FpGroup& target);
    static GroupHom scalar(const FpGroup& g, const Int& c);

    const FpGroup& source() const { return source_; }
    const FpGroup& target() const { return target_; }
    const IntMatrix& matrix() const { return matrix_; } // target gens x source gens

    Vec apply(const Vec& v) const { return matrix_.apply(v); }
    GroupHom compose_after(const GroupHom& inner) const; // this o inner

    bool is_zero_hom() const;
    bool equal_mod_relations(const GroupHom& o) const;
    bool is_injective() const;
    bool is_surjective() const;

private:
    FpGroup source_, target_;
    IntMatrix matrix_;
};

// Subgroup of an ambient FpGroup, generated by columns in ambient coordinates.
struct Subgroup {
    FpGroup ambient;
    IntMatrix generators; // ambient.gens x k

    // Column lattice representing the subgroup: generators plus relations.
    IntMatrix full_lattice() const { return generators.hstack(ambient.relation_cols()); }
    Vec zero_vec() const { return Vec(ambient.gens()); }

    bool contains(const Vec& v) const { return lattice_contains(full_lattice(), v); }
    bool contains(const Subgroup& o) const;

    static Subgroup full(const FpGroup& g) { return {g, IntMatrix::identity(g.gens())}; }
    static Subgroup zero(const FpGroup& g) { return {g, IntMatrix(g.gens(), 0)}; }
};

// Presentation of the subquotient (span(num) + rel) / (span(den) + rel) of an
// ambient presented group; generators of the result are the columns of num.
struct Presented {
    FpGroup group;
    IntMatrix num; // ambient_gens x group.gens: generator representatives
    IntMatrix den; // ambient_gens x d (includes the ambient relations)

    // Coordinates of an ambient vector (lying in span(num)) in the
    // presentation's generators.
    Vec coords(const Vec& ambient_vec) const;
};

// num and den are column lattices in Z^n with span(den) <= span(num); the
// ambient relations must already be included in both as appropriate.
Presented subquotient(std::size_t n, const IntMatrix& num, const IntMatrix& den,
                      bool keep_gens = false);

struct HomParts {
    FpGroup kernel;
    GroupHom kernel_inclusion;
    FpGroup image;
    GroupHom image_inclusion;
    FpGroup cokernel;
    GroupHom cokernel_projection;
};
HomParts hom_parts(const GroupHom& f);

struct SubgroupLattice {
    Subgroup sum;
    Subgroup intersection;
    bool contains_a_b; // A >= B
    bool contains_b_a; // B >= A
};
SubgroupLattice subgroup_lattice(const Subgroup& a, const Subgroup& b);

Subgroup preimage(const GroupHom& f, const Subgroup& s);

FpGroup quotient_by(const Subgroup& s); // ambient / subgroup

// ker(g) / im(f) for a three-term complex; requires g o f = 0 and matching
// endpoints. The Presented's ambient is g's source.
Presented cohomology_at(const GroupHom& f, const GroupHom& g);

} // namespace finsheaf
