#include "finsheaf/group.hpp"

#include <sstream>

namespace finsheaf {

FpGroup::FpGroup(std::size_t gens, IntMatrix relations)
    : gens_(gens), relations_(std::move(relations)) {
    if (relations_.cols() != gens_)
        throw std::invalid_argument("FpGroup: relation width must equal generator count");
    SnfResult snf = smith_normal_form(relations_);
    std::size_t nonzero = snf.rank();
    rank_ = gens_ - nonzero;
    for (const auto& d : snf.diagonal())
        if (d > 1) torsion_.push_back(d);
}

FpGroup FpGroup::cyclic(const Int& d) {
    IntMatrix rel(1, 1);
    rel.at(0, 0) = d;
    return FpGroup(1, rel);
}

bool FpGroup::element_is_zero(const Vec& v) const {
    return lattice_contains(relation_cols(), v);
}

std::string FpGroup::render() const {
    if (is_trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (rank_ > 0) {
        os << (rank_ == 1 ? "Z" : "Z^" + std::to_string(rank_));
        first = false;
    }
    for (const auto& d : torsion_) {
        if (!first) os << " \xE2\x8A\x95 ";
        os << "Z/" << d.get_str();
        first = false;
    }
    return os.str();
}

FpGroup direct_sum(const std::vector<FpGroup>& parts) {
    std::size_t gens = 0, rels = 0;
    for (const auto& p : parts) {
        gens += p.gens();
        rels += p.relations().rows();
    }
    IntMatrix rel(rels, gens);
    std::size_t goff = 0, roff = 0;
    for (const auto& p : parts) {
        const IntMatrix& r = p.relations();
        for (std::size_t i = 0; i < r.rows(); ++i)
            for (std::size_t j = 0; j < r.cols(); ++j)
                rel.at(roff + i, goff + j) = r.at(i, j);
        goff += p.gens();
        roff += r.rows();
    }
    return FpGroup(gens, rel);
}

// ---------------------------------------------------------------------------

GroupHom::GroupHom(FpGroup source, FpGroup target, IntMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.gens() || matrix_.cols() != source_.gens())
        fail(ErrorKind::IllFormedHom,
             "matrix shape " + std::to_string(matrix_.rows()) + "x" + std::to_string(matrix_.cols()) +
                 " does not match target x source generators");
    // Well-definedness: each source relation must land in the target relations.
    IntMatrix mapped = matrix_ * source_.relation_cols();
    if (!lattice_solve_all(target_.relation_cols(), mapped))
        fail(ErrorKind::IllFormedHom, "a source relation does not map into the target relations");
}

GroupHom GroupHom::identity(const FpGroup& g) {
    return GroupHom(g, g, IntMatrix::identity(g.gens()));
}

GroupHom GroupHom::zero(const FpGroup& source, const FpGroup& target) {
    return GroupHom(source, target, IntMatrix(target.gens(), source.gens()));
}

GroupHom GroupHom::scalar(const FpGroup& g, const Int& c) {
    IntMatrix m = IntMatrix::identity(g.gens());
    for (std::size_t i = 0; i < g.gens(); ++i) m.at(i, i) = c;
    return GroupHom(g, g, m);
}

GroupHom GroupHom::compose_after(const GroupHom& inner) const {
    if (!(inner.target_ == source_))
        fail(ErrorKind::ChainMismatch, "composition endpoints disagree");
    return GroupHom(inner.source_, target_, matrix_ * inner.matrix_);
}

bool GroupHom::is_zero_hom() const {
    return lattice_solve_all(target_.relation_cols(), matrix_).has_value();
}

bool GroupHom::equal_mod_relations(const GroupHom& o) const {
    if (!(source_ == o.source_) || !(target_ == o.target_)) return false;
    return lattice_solve_all(target_.relation_cols(), matrix_ - o.matrix_).has_value();
}

bool GroupHom::is_injective() const { return hom_parts(*this).kernel.is_trivial(); }
bool GroupHom::is_surjective() const { return hom_parts(*this).cokernel.is_trivial(); }

// ---------------------------------------------------------------------------

bool Subgroup::contains(const Subgroup& o) const {
    IntMatrix lat = full_lattice();
    for (std::size_t j = 0; j < o.generators.cols(); ++j)
        if (!lattice_contains(lat, o.generators.col(j))) return false;
    return true;
}

Vec Presented::coords(const Vec& ambient_vec) const {
    auto sol = lattice_solve(num, ambient_vec);
    if (!sol)
        throw std::logic_error("Presented::coords: vector not in the presented span");
    return *sol;
}

Presented subquotient(std::size_t n, const IntMatrix& num, const IntMatrix& den, bool keep_gens) {
    if (num.rows() != n || den.rows() != n)
        throw std::invalid_argument("subquotient: ambient dimension mismatch");
    IntMatrix basis = keep_gens ? num : lattice_basis(num);
    auto rel_coords = lattice_solve_all(basis, den);
    if (!rel_coords)
        throw std::logic_error("subquotient: denominator lattice not inside numerator");
    FpGroup g(basis.cols(), rel_coords->transpose());
    return Presented{std::move(g), std::move(basis), den};
}

HomParts hom_parts(const GroupHom& f) {
    const std::size_t ns = f.source().gens();
    const std::size_t nt = f.target().gens();
    const IntMatrix& m = f.matrix();
    IntMatrix rsrc = f.source().relation_cols();
    IntMatrix rdst = f.target().relation_cols();

    // Kernel: x with m x in the target relation lattice.
    IntMatrix ker_xz = kernel_basis(m.hstack(rdst.negated()));
    IntMatrix ker_x = ker_xz.submatrix(0, 0, ns, ker_xz.cols());
    Presented ker = subquotient(ns, lattice_basis(ker_x.hstack(rsrc)), rsrc);
    GroupHom ker_inc(ker.group, f.source(), ker.num);

    // Image: the subgroup of the target spanned by the columns of m.
    Presented img = subquotient(nt, lattice_basis(m.hstack(rdst)), rdst);
    GroupHom img_inc(img.group, f.target(), img.num);

    // Cokernel: target generators with the image added to the relations.
    Presented cok = subquotient(nt, IntMatrix::identity(nt), m.hstack(rdst), /*keep_gens=*/true);
    GroupHom cok_proj(f.target(), cok.group, IntMatrix::identity(nt));

    return HomParts{ker.group, std::move(ker_inc), img.group, std::move(img_inc),
                    cok.group, std::move(cok_proj)};
}

SubgroupLattice subgroup_lattice(const Subgroup& a, const Subgroup& b) {
    if (!(a.ambient == b.ambient))
        fail(ErrorKind::AmbientMismatch, "subgroup_lattice: ambients differ");
    Subgroup sum{a.ambient, lattice_basis(a.generators.hstack(b.generators))};
    Subgroup inter{a.ambient, lattice_intersect(a.full_lattice(), b.full_lattice())};
    return SubgroupLattice{std::move(sum), std::move(inter), a.contains(b), b.contains(a)};
}

Subgroup preimage(const GroupHom& f, const Subgroup& s) {
    if (!(s.ambient == f.target()))
        fail(ErrorKind::AmbientMismatch, "preimage: subgroup not in the hom's target");
    const std::size_t ns = f.source().gens();
    IntMatrix ker = kernel_basis(f.matrix().hstack(s.full_lattice().negated()));
    IntMatrix xpart = ker.submatrix(0, 0, ns, ker.cols());
    IntMatrix gens = lattice_basis(xpart.hstack(f.source().relation_cols()));
    return Subgroup{f.source(), std::move(gens)};
}

FpGroup quotient_by(const Subgroup& s) {
    const std::size_t n = s.ambient.gens();
    return subquotient(n, IntMatrix::identity(n), s.full_lattice(), /*keep_gens=*/true).group;
}

Presented cohomology_at(const GroupHom& f, const GroupHom& g) {
    if (!(f.target() == g.source()))
        fail(ErrorKind::ChainMismatch, "cohomology_at: endpoints disagree");
    IntMatrix comp = g.matrix() * f.matrix();
    if (!lattice_solve_all(g.target().relation_cols(), comp))
        fail(ErrorKind::NotAComplex, "cohomology_at: g o f is not zero");

    const std::size_t nb = g.source().gens();
    IntMatrix rb = g.source().relation_cols();
    IntMatrix rc = g.target().relation_cols();
    IntMatrix ker_xz = kernel_basis(g.matrix().hstack(rc.negated()));
    IntMatrix ker_x = ker_xz.submatrix(0, 0, nb, ker_xz.cols());
    IntMatrix num = lattice_basis(ker_x.hstack(rb));
    IntMatrix den = f.matrix().hstack(rb);
    return subquotient(nb, num, den);
}

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::IllFormedHom: return "IllFormedHom";
        case ErrorKind::AmbientMismatch: return "AmbientMismatch";
        case ErrorKind::NotAComplex: return "NotAComplex";
        case ErrorKind::ChainMismatch: return "ChainMismatch";
        case ErrorKind::NotAntisymmetric: return "NotAntisymmetric";
        case ErrorKind::UnknownPoint: return "UnknownPoint";
        case ErrorKind::TooManyOpens: return "TooManyOpens";
        case ErrorKind::FunctorialityViolation: return "FunctorialityViolation";
        case ErrorKind::MissingRestriction: return "MissingRestriction";
        case ErrorKind::NotOpen: return "NotOpen";
        case ErrorKind::NotACover: return "NotACover";
        case ErrorKind::NaturalityViolation: return "NaturalityViolation";
        case ErrorKind::NotExactInput: return "NotExactInput";
        case ErrorKind::SignViolation: return "SignViolation";
        case ErrorKind::NotStabilized: return "NotStabilized";
        case ErrorKind::NotAResolution: return "NotAResolution";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::SchemaError: return "SchemaError";
    }
    return "Error";
}

} // namespace finsheaf
