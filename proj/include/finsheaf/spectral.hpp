#pragma once

#include <map>

#include "finsheaf/sheaf.hpp"

namespace finsheaf {

// Runtime switch for the OpenMP cell loops; the serial path is the reference.
bool parallel_enabled();
void set_parallel(bool on);

// Cochain complex of f.p. abelian groups in degrees 0..terms-1; composite
// zero is verified at construction.
class GroupComplex {
public:
    GroupComplex() = default;
    GroupComplex(std::vector<FpGroup> terms, std::vector<GroupHom> differentials);

    const std::vector<FpGroup>& terms() const { return terms_; }
    const std::vector<GroupHom>& differentials() const { return diffs_; }
    std::size_t length() const { return terms_.size(); }

    GroupHom incoming(std::size_t k) const; // d_{k-1}, or zero from the trivial group
    GroupHom outgoing(std::size_t k) const; // d_k, or zero into the trivial group

    FpGroup cohomology(std::size_t k) const;
    std::vector<FpGroup> cohomology() const;

private:
    std::vector<FpGroup> terms_;
    std::vector<GroupHom> diffs_;
};

// Cochain complex of sheaves; composite zero is verified stalkwise.
class SheafComplex {
public:
    SheafComplex(std::vector<Sheaf> terms, std::vector<SheafHom> differentials);

    const std::vector<Sheaf>& terms() const { return terms_; }
    const std::vector<SheafHom>& differentials() const { return diffs_; }
    std::size_t length() const { return terms_.size(); }
    const FiniteSpace& space() const { return terms_.front().space(); }
    const SpacePtr& space_ptr() const { return terms_.front().space_ptr(); }

private:
    std::vector<Sheaf> terms_;
    std::vector<SheafHom> diffs_;
};

// Stalkwise kernel-mod-image with the induced restrictions; the sheaf-valued
// cohomology of the complex (not sheaf cohomology of its terms).
std::vector<Sheaf> cohomology_sheaves(const SheafComplex& l);

// First-quadrant double complex with commuting differentials: horizontal
// (p,q) -> (p+1,q) and vertical (p,q) -> (p,q+1).
class DoubleComplex {
public:
    DoubleComplex(std::vector<std::vector<FpGroup>> cells,
                  std::vector<std::vector<GroupHom>> horizontal,
                  std::vector<std::vector<GroupHom>> vertical);

    std::size_t pmax() const { return cells_.size() - 1; }
    std::size_t qmax() const { return cells_.front().size() - 1; }
    const FpGroup& cell(std::size_t p, std::size_t q) const { return cells_[p][q]; }
    const GroupHom& horizontal(std::size_t p, std::size_t q) const { return horiz_[p][q]; }
    const GroupHom& vertical(std::size_t p, std::size_t q) const { return vert_[p][q]; }

    DoubleComplex transposed() const;

private:
    std::vector<std::vector<FpGroup>> cells_; // [p][q]
    std::vector<std::vector<GroupHom>> horiz_; // [p][q], p < pmax
    std::vector<std::vector<GroupHom>> vert_;  // [p][q], q < qmax
};

struct TotalCell {
    std::size_t p, q;
    std::size_t offset; // generator offset inside the degree's direct sum
};

// Total complex K^n = sum of cells with p+q = n, D = delta + (-1)^p d.
// use_sign = false drops the sign twist; on a complex with a nonzero
// horizontal-then-vertical composite that breaks D^2 = 0.
struct TotalComplex {
    GroupComplex complex;
    std::vector<std::vector<TotalCell>> layout; // per degree, cells by increasing p
};
TotalComplex total_complex(const DoubleComplex& k, bool use_sign = true);

enum class Axis { by_p, by_q };

// Pages of the filtration spectral sequence. For axis by_q everything is
// computed on the transposed complex, so the first index is always the
// filtration degree and stored differentials have bidegree (r, 1-r) in that
// indexing.
struct SpectralPages {
    Axis axis = Axis::by_p;
    std::size_t pmax = 0, qmax = 0;
    std::size_t rstar = 0; // page where everything has stabilized

    std::vector<std::vector<std::vector<FpGroup>>> pages; // [r][p][q], r = 0..rmax
    // per page r, differentials keyed by source (p,q); only maps with both
    // endpoints inside the bounds are stored (the rest are zero)
    std::vector<std::map<std::pair<std::size_t, std::size_t>, GroupHom>> differentials;

    std::vector<std::vector<FpGroup>> einf;         // pages[rstar]
    std::vector<std::vector<FpGroup>> graded_total; // induced filtration on H_D
    std::vector<FpGroup> total_cohomology;          // H_D^n, n = 0..pmax+qmax
    // degrees n where the torsion of H_D^n differs from the torsion of the
    // direct sum of the einf terms on the antidiagonal (the extension problem)
    std::vector<std::size_t> extension_flags;
    bool converged = false; // einf isomorphic to graded_total cellwise

    const FpGroup& page(std::size_t r, std::size_t p, std::size_t q) const {
        return pages[r][p][q];
    }
};

// rmax must reach the stabilization page max(pmax, qmax) + 2, else
// NotStabilized (the message reports the bound).
SpectralPages spectral_sequence(const DoubleComplex& k, Axis axis, std::size_t rmax);

} // namespace finsheaf
