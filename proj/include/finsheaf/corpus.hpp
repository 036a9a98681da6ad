#pragma once

#include <random>

#include "finsheaf/hyper.hpp"

namespace finsheaf::corpus {

// Model spaces (specialization order; opens are down-closed sets).
SpacePtr point_space();
SpacePtr sierpinski();   // a open, b closed
SpacePtr discrete_two(); // two components
SpacePtr pseudocircle(); // a,b open; c,d closed; finite circle model
SpacePtr sphere6();      // three levels a,b < c,d < e,f; finite 2-sphere model

std::vector<std::string> space_names();
SpacePtr space_by_name(const std::string& name);

// Named sheaf builders on a given space: "constZ", "constZ2", "zero",
// "sky:<point>".
std::vector<std::string> sheaf_names(const SpacePtr& space);
Sheaf sheaf_by_name(const SpacePtr& space, const std::string& name);

struct NamedSheaf {
    std::string space_name;
    std::string sheaf_name;
    Sheaf sheaf;
};
// The bundled (space, sheaf) pairs; at least ten.
std::vector<NamedSheaf> standard_pairs();
// The bundled skyscrapers supported at closed points.
std::vector<NamedSheaf> closed_skyscrapers();

// 0 -> F -> 0 as a one-term complex.
SheafComplex single_complex(const Sheaf& f);

// Hand-built flasque resolutions (not the canonical one), padded with zero
// sheaves so that terms run through degree kmax+1.
SheafResolution sierpinski_handbuilt_resolution(std::size_t kmax);
SheafResolution pseudocircle_handbuilt_resolution(std::size_t kmax);
// Exact, but its degree-0 term (constant Z on the circle model) has H^1 = Z.
SheafResolution pseudocircle_nonacyclic_resolution(std::size_t kmax);

std::vector<std::string> resolution_names();
SheafResolution resolution_by_name(const std::string& name, std::size_t kmax);

// Random unimodular matrix from elementary operations; if inverse is given
// it receives the exact inverse.
IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, IntMatrix* inverse);

// Random first-quadrant double complex: a direct sum of dots, scaled
// intervals, and commuting squares, conjugated cellwise by random unimodular
// basis changes. Cell ranks stay <= max_rank.
DoubleComplex random_double_complex(std::mt19937_64& rng, std::size_t pmax, std::size_t qmax,
                                    std::size_t max_rank);

} // namespace finsheaf::corpus
