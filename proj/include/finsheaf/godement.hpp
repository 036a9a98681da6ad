#pragma once

#include "finsheaf/sheaf.hpp"

namespace finsheaf {

// One step of the canonical resolution: 0 -> F -> C0(F) -> Q -> 0, where
// C0(F) has stalk prod_{q in U_p} F_q at p with coordinate projections as
// restrictions.
struct GodementStep {
    Sheaf input;
    Sheaf c0;
    SheafHom unit;       // F -> C0(F), germ to its family of restrictions
    Sheaf quotient;      // Q = C0(F) / F, stalkwise cokernel
    SheafHom projection; // C0(F) -> Q
};
GodementStep godement_step(const Sheaf& f);

// Functoriality of the step: given phi : F -> G and the steps over both,
// the induced maps C0(F) -> C0(G) and Q_F -> Q_G.
struct GodementStepHom {
    SheafHom c0_map;
    SheafHom quotient_map;
};
GodementStepHom godement_step_hom(const GodementStep& sf, const GodementStep& sg,
                                  const SheafHom& phi);

// The canonical resolution up to degree kmax+1, spliced from iterated steps.
struct Resolution {
    Sheaf base;
    std::vector<GodementStep> steps;     // step k resolves Q^k (Q^0 = base)
    std::vector<Sheaf> terms;            // C^0 F .. C^{kmax+1} F
    SheafHom augmentation;               // F -> C^0 F
    std::vector<SheafHom> differentials; // terms[k] -> terms[k+1]
};
Resolution godement_resolution(const Sheaf& f, std::size_t kmax);

// Lift phi : F -> G through the two resolutions: maps C^p F -> C^p G,
// one per common term.
std::vector<SheafHom> godement_hom_tower(const Resolution& rf, const Resolution& rg,
                                         const SheafHom& phi);

// Surjectivity of Gamma(X, F) -> Gamma(U, F) for every open U (full
// enumeration under the cap).
bool is_flasque(const Sheaf& f, std::size_t cap = 4096);

// H^0..H^kmax via global sections of the Godement resolution.
std::vector<FpGroup> sheaf_cohomology(const Sheaf& f, std::size_t kmax);

// Independent oracle: the chain-indexed complex C^k = prod over strict
// k-chains p_0 < ... < p_k of stalk(p_0), with the alternating coface
// differential (face 0 applies the restriction along p_0 <= p_1). Its
// cohomology computes the higher derived limits of the stalk functor.
std::vector<FpGroup> lim_higher_oracle(const Sheaf& f, std::size_t kmax);

struct PartitionReport {
    bool valid = false;
    bool supports_ok = false; // supp eta_a inside U_a for every a
    bool sums_ok = false;     // stalk maps sum to the identity at every point
    std::string detail;
};
PartitionReport verify_partition_of_unity(const Sheaf& f,
                                          const std::vector<FiniteSpace::Mask>& cover,
                                          const std::vector<SheafHom>& etas);

} // namespace finsheaf
