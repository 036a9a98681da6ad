#pragma once

#include "finsheaf/godement.hpp"
#include "finsheaf/spectral.hpp"

namespace finsheaf {

// Resolution presented independently of how it was built: exactness of
// 0 -> F -> L^0 -> L^1 -> ... is what matters, not the construction.
struct SheafResolution {
    Sheaf base;
    std::vector<Sheaf> terms;
    SheafHom augmentation;
    std::vector<SheafHom> differentials;
};

SheafResolution as_resolution(const Resolution& r);

// Global sections of the canonical double complex C^p L^q, with horizontal
// maps from each term's resolution and vertical maps induced functorially.
// p is truncated at pmax; q runs over the complex.
DoubleComplex godement_double_complex(const SheafComplex& l, std::size_t pmax);

struct Hypercohomology {
    std::vector<FpGroup> groups; // degrees 0..kmax
    SpectralPages by_p;
    SpectralPages by_q;
};

// Total cohomology of the canonical double complex through degree kmax,
// plus both filtration spectral sequences.
Hypercohomology hypercohomology(const SheafComplex& l, std::size_t kmax);

struct AcyclicReport {
    bool all_acyclic = false;
    // (term index q, degree k) with H^k(X, L^q) nonzero, 1 <= k <= kmax
    std::vector<std::pair<std::size_t, std::size_t>> acyclic_failures;
    std::vector<FpGroup> h_sections; // h^k of the global-section complex
    std::vector<FpGroup> h_sheaf;    // H^k(X, base)
    bool isomorphic = false;         // the two agree degreewise
    bool verdict = false;            // all_acyclic && isomorphic
    // degeneration patterns of the associated double complex:
    // E_1 of by_p concentrated in the zero row (resolution-like complex)
    bool row_pattern_ok = false;
    // E_1 of by_q concentrated in its zero row (all terms acyclic); holds
    // exactly when the terms are acyclic
    bool column_pattern_ok = false;
};

// Verifies that r is a resolution of f (NotAResolution otherwise), then
// checks term-by-term acyclicity through degree kmax and compares the
// cohomology of the global-section complex against the sheaf cohomology of
// the base. A failing acyclicity check is a report verdict, not an error.
AcyclicReport acyclic_resolution_check(const Sheaf& f, const SheafResolution& r,
                                       std::size_t kmax);

} // namespace finsheaf
