#include "finsheaf/finspace.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>

namespace finsheaf {

FiniteSpace::FiniteSpace(std::vector<std::string> points,
                         const std::vector<std::pair<std::string, std::string>>& leq_pairs)
    : points_(std::move(points)) {
    const std::size_t n = points_.size();
    if (n > 63) fail(ErrorKind::TooManyOpens, "spaces are limited to 63 points");
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) {
        if (index.count(points_[i]))
            fail(ErrorKind::UnknownPoint, "duplicate point name '" + points_[i] + "'");
        index[points_[i]] = i;
    }

    leq_.assign(n * n, false);
    for (std::size_t i = 0; i < n; ++i) leq_[i * n + i] = true;
    for (const auto& [a, b] : leq_pairs) {
        auto ia = index.find(a), ib = index.find(b);
        if (ia == index.end()) fail(ErrorKind::UnknownPoint, "unknown point '" + a + "'");
        if (ib == index.end()) fail(ErrorKind::UnknownPoint, "unknown point '" + b + "'");
        leq_[ia->second * n + ib->second] = true;
    }
    // Warshall transitive closure.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (leq_[i * n + k])
                for (std::size_t j = 0; j < n; ++j)
                    if (leq_[k * n + j]) leq_[i * n + j] = true;
    // Antisymmetry is the T0 condition.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (leq_[i * n + j] && leq_[j * n + i])
                fail(ErrorKind::NotAntisymmetric,
                     "points '" + points_[i] + "' and '" + points_[j] + "' are order-equivalent");
}

std::size_t FiniteSpace::point_index(const std::string& name) const {
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (points_[i] == name) return i;
    fail(ErrorKind::UnknownPoint, "unknown point '" + name + "'");
}

bool FiniteSpace::is_open(Mask members) const {
    const std::size_t n = size();
    for (std::size_t p = 0; p < n; ++p) {
        if (!(members & bit(p))) continue;
        for (std::size_t q = 0; q < n; ++q)
            if (leq(q, p) && !(members & bit(q))) return false;
    }
    return true;
}

FiniteSpace::Mask FiniteSpace::minimal_open(std::size_t p) const {
    if (p >= size()) fail(ErrorKind::UnknownPoint, "point index out of range");
    Mask m = 0;
    for (std::size_t q = 0; q < size(); ++q)
        if (leq(q, p)) m |= bit(q);
    return m;
}

std::vector<FiniteSpace::Mask> FiniteSpace::enumerate_opens(std::size_t cap) const {
    const std::size_t n = size();
    std::vector<Mask> opens;
    if (n > 22) fail(ErrorKind::TooManyOpens, "open-set enumeration limited to 22 points");
    const Mask total = whole();
    for (Mask m = 0; ; ++m) {
        if (is_open(m)) {
            opens.push_back(m);
            if (opens.size() > cap)
                fail(ErrorKind::TooManyOpens,
                     "more than " + std::to_string(cap) + " open sets");
        }
        if (m == total) break;
    }
    std::stable_sort(opens.begin(), opens.end(), [](Mask a, Mask b) {
        int ca = std::popcount(a), cb = std::popcount(b);
        if (ca != cb) return ca < cb;
        return a < b; // lexicographic in declared point order (bit 0 first)
    });
    return opens;
}

std::vector<std::vector<std::size_t>> FiniteSpace::chains(std::size_t k) const {
    const std::size_t n = size();
    std::vector<std::vector<std::size_t>> result;
    std::vector<std::size_t> cur;
    // depth-first extension keeps lexicographic order
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == k + 1) {
            result.push_back(cur);
            return;
        }
        for (std::size_t p = 0; p < n; ++p) {
            if (!cur.empty() && !strictly_less(cur.back(), p)) continue;
            cur.push_back(p);
            self(self, depth + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return result;
}

std::size_t FiniteSpace::height() const {
    std::size_t h = 0;
    while (!chains(h + 1).empty()) ++h;
    return h;
}

std::vector<std::size_t> FiniteSpace::mask_points(Mask m) const {
    std::vector<std::size_t> pts;
    for (std::size_t i = 0; i < size(); ++i)
        if (m & bit(i)) pts.push_back(i);
    return pts;
}

std::string FiniteSpace::mask_to_string(Mask m) const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (std::size_t i : mask_points(m)) {
        if (!first) os << ",";
        os << points_[i];
        first = false;
    }
    os << "}";
    return os.str();
}

} // namespace finsheaf
