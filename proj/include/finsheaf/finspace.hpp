#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "finsheaf/error.hpp"

namespace finsheaf {

// Finite T0 space as its specialization order. p <= q means U_p is contained
// in U_q; open sets are exactly the down-closed subsets, and the minimal open
// neighborhood of p is its down-set.
class FiniteSpace {
public:
    // leq_pairs lists (p, q) with p <= q; the reflexive-transitive closure is
    // taken and antisymmetry (T0) enforced.
    FiniteSpace(std::vector<std::string> points,
                const std::vector<std::pair<std::string, std::string>>& leq_pairs);

    std::size_t size() const { return points_.size(); }
    const std::vector<std::string>& points() const { return points_; }
    const std::string& point_name(std::size_t i) const { return points_[i]; }
    std::size_t point_index(const std::string& name) const;

    bool leq(std::size_t p, std::size_t q) const { return leq_[p * size() + q]; }
    bool strictly_less(std::size_t p, std::size_t q) const { return p != q && leq(p, q); }

    using Mask = std::uint64_t;
    static Mask bit(std::size_t i) { return Mask(1) << i; }
    bool is_open(Mask members) const; // down-closed?
    Mask minimal_open(std::size_t p) const;
    Mask whole() const { return (size() == 64) ? ~Mask(0) : (Mask(1) << size()) - 1; }

    // All open sets, ordered by size then lexicographic membership in the
    // declared point order. Throws TooManyOpens beyond the cap.
    std::vector<Mask> enumerate_opens(std::size_t cap = 4096) const;

    // Strict chains p_0 < p_1 < ... < p_k (point indices), lexicographic.
    std::vector<std::vector<std::size_t>> chains(std::size_t k) const;

    std::size_t height() const; // longest strict chain length minus one

    std::vector<std::size_t> mask_points(Mask m) const;
    std::string mask_to_string(Mask m) const;

    bool operator==(const FiniteSpace& o) const {
        return points_ == o.points_ && leq_ == o.leq_;
    }

private:
    std::vector<std::string> points_;
    std::vector<bool> leq_; // row p, col q: p <= q
};

} // namespace finsheaf
