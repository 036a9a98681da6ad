#include "finsheaf/spectral.hpp"

#include <atomic>
#include <optional>

namespace finsheaf {

namespace {
std::atomic<bool> g_parallel{true};
}

bool parallel_enabled() { return g_parallel.load(); }
void set_parallel(bool on) { g_parallel.store(on); }

// -- GroupComplex -------------------------------------------------------------

GroupComplex::GroupComplex(std::vector<FpGroup> terms, std::vector<GroupHom> differentials)
    : terms_(std::move(terms)), diffs_(std::move(differentials)) {
    if (terms_.empty()) fail(ErrorKind::ChainMismatch, "a complex needs at least one term");
    if (diffs_.size() + 1 != terms_.size())
        fail(ErrorKind::ChainMismatch, "differential count must be term count minus one");
    for (std::size_t k = 0; k < diffs_.size(); ++k) {
        if (!(diffs_[k].source() == terms_[k]) || !(diffs_[k].target() == terms_[k + 1]))
            fail(ErrorKind::ChainMismatch, "differential " + std::to_string(k) + " endpoints disagree with the terms");
        if (k > 0 && !diffs_[k].compose_after(diffs_[k - 1]).is_zero_hom())
            fail(ErrorKind::NotAComplex, "composite at degree " + std::to_string(k) + " is nonzero");
    }
}

GroupHom GroupComplex::incoming(std::size_t k) const {
    if (k == 0 || k > diffs_.size()) return GroupHom::zero(FpGroup::trivial(), terms_[k]);
    return diffs_[k - 1];
}

GroupHom GroupComplex::outgoing(std::size_t k) const {
    if (k < diffs_.size()) return diffs_[k];
    return GroupHom::zero(terms_[k], FpGroup::trivial());
}

FpGroup GroupComplex::cohomology(std::size_t k) const {
    return cohomology_at(incoming(k), outgoing(k)).group;
}

std::vector<FpGroup> GroupComplex::cohomology() const {
    std::vector<FpGroup> h(terms_.size());
#pragma omp parallel for schedule(dynamic) if (parallel_enabled())
    for (long long k = 0; k < (long long)terms_.size(); ++k)
        h[k] = cohomology(k);
    return h;
}

// -- SheafComplex -------------------------------------------------------------

SheafComplex::SheafComplex(std::vector<Sheaf> terms, std::vector<SheafHom> differentials)
    : terms_(std::move(terms)), diffs_(std::move(differentials)) {
    if (terms_.empty()) fail(ErrorKind::ChainMismatch, "a complex needs at least one term");
    if (diffs_.size() + 1 != terms_.size())
        fail(ErrorKind::ChainMismatch, "differential count must be term count minus one");
    for (std::size_t k = 0; k < diffs_.size(); ++k) {
        if (!(diffs_[k].source() == terms_[k]) || !(diffs_[k].target() == terms_[k + 1]))
            fail(ErrorKind::ChainMismatch, "differential " + std::to_string(k) + " endpoints disagree with the terms");
        if (k > 0)
            for (std::size_t p = 0; p < space().size(); ++p)
                if (!diffs_[k].stalk_map(p).compose_after(diffs_[k - 1].stalk_map(p)).is_zero_hom())
                    fail(ErrorKind::NotAComplex, "composite at degree " + std::to_string(k) +
                                                     " is nonzero at point " + space().point_name(p));
    }
}

std::vector<Sheaf> cohomology_sheaves(const SheafComplex& l) {
    const FiniteSpace& x = l.space();
    const std::size_t n = x.size();

    auto hom_at = [&](std::size_t k, std::size_t p, bool out) -> GroupHom {
        if (out) {
            if (k < l.differentials().size()) return l.differentials()[k].stalk_map(p);
            return GroupHom::zero(l.terms()[k].stalk(p), FpGroup::trivial());
        }
        if (k == 0) return GroupHom::zero(FpGroup::trivial(), l.terms()[k].stalk(p));
        return l.differentials()[k - 1].stalk_map(p);
    };

    std::vector<Sheaf> result;
    for (std::size_t k = 0; k < l.length(); ++k) {
        std::vector<Presented> pres;
        for (std::size_t p = 0; p < n; ++p)
            pres.push_back(cohomology_at(hom_at(k, p, false), hom_at(k, p, true)));

        std::vector<FpGroup> stalks;
        for (const Presented& pr : pres) stalks.push_back(pr.group);

        std::map<std::pair<std::size_t, std::size_t>, GroupHom> rest;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q) {
                if (!x.strictly_less(q, p)) continue;
                IntMatrix moved = l.terms()[k].restriction(p, q).matrix() * pres[p].num;
                auto sol = lattice_solve_all(pres[q].num.hstack(pres[q].den), moved);
                if (!sol)
                    fail(ErrorKind::FunctorialityViolation,
                         "restriction does not descend to the cohomology sheaf");
                rest.emplace(std::make_pair(p, q),
                             GroupHom(stalks[p], stalks[q],
                                      sol->submatrix(0, 0, stalks[q].gens(), stalks[p].gens())));
            }
        result.emplace_back(l.space_ptr(), std::move(stalks), rest);
    }
    return result;
}

// -- DoubleComplex ------------------------------------------------------------

DoubleComplex::DoubleComplex(std::vector<std::vector<FpGroup>> cells,
                             std::vector<std::vector<GroupHom>> horizontal,
                             std::vector<std::vector<GroupHom>> vertical)
    : cells_(std::move(cells)), horiz_(std::move(horizontal)), vert_(std::move(vertical)) {
    if (cells_.empty() || cells_.front().empty())
        fail(ErrorKind::ChainMismatch, "a double complex needs at least one cell");
    const std::size_t pm = pmax(), qm = qmax();
    for (const auto& col : cells_)
        if (col.size() != qm + 1) fail(ErrorKind::ChainMismatch, "ragged cell grid");
    if (horiz_.size() != pm || (pm > 0 && horiz_.front().size() != qm + 1))
        fail(ErrorKind::ChainMismatch, "horizontal maps must cover p < pmax at every q");
    if (vert_.size() != pm + 1 || vert_.front().size() != qm)
        fail(ErrorKind::ChainMismatch, "vertical maps must cover q < qmax at every p");

    for (std::size_t p = 0; p < pm; ++p)
        for (std::size_t q = 0; q <= qm; ++q)
            if (!(horiz_[p][q].source() == cells_[p][q]) || !(horiz_[p][q].target() == cells_[p + 1][q]))
                fail(ErrorKind::ChainMismatch, "horizontal map endpoints disagree at (" +
                                                   std::to_string(p) + "," + std::to_string(q) + ")");
    for (std::size_t p = 0; p <= pm; ++p)
        for (std::size_t q = 0; q < qm; ++q)
            if (!(vert_[p][q].source() == cells_[p][q]) || !(vert_[p][q].target() == cells_[p][q + 1]))
                fail(ErrorKind::ChainMismatch, "vertical map endpoints disagree at (" +
                                                   std::to_string(p) + "," + std::to_string(q) + ")");

    for (std::size_t p = 0; p + 2 <= pm; ++p)
        for (std::size_t q = 0; q <= qm; ++q)
            if (!horiz_[p + 1][q].compose_after(horiz_[p][q]).is_zero_hom())
                fail(ErrorKind::NotAComplex, "horizontal composite nonzero at (" +
                                                 std::to_string(p) + "," + std::to_string(q) + ")");
    for (std::size_t p = 0; p <= pm; ++p)
        for (std::size_t q = 0; q + 2 <= qm; ++q)
            if (!vert_[p][q + 1].compose_after(vert_[p][q]).is_zero_hom())
                fail(ErrorKind::NotAComplex, "vertical composite nonzero at (" +
                                                 std::to_string(p) + "," + std::to_string(q) + ")");
    for (std::size_t p = 0; p < pm; ++p)
        for (std::size_t q = 0; q < qm; ++q) {
            GroupHom a = vert_[p + 1][q].compose_after(horiz_[p][q]);
            GroupHom b = horiz_[p][q + 1].compose_after(vert_[p][q]);
            if (!a.equal_mod_relations(b))
                fail(ErrorKind::SignViolation, "differentials do not commute at (" +
                                                   std::to_string(p) + "," + std::to_string(q) + ")");
        }
}

DoubleComplex DoubleComplex::transposed() const {
    const std::size_t pm = pmax(), qm = qmax();
    std::vector<std::vector<FpGroup>> cells(qm + 1, std::vector<FpGroup>(pm + 1));
    for (std::size_t p = 0; p <= pm; ++p)
        for (std::size_t q = 0; q <= qm; ++q) cells[q][p] = cells_[p][q];
    std::vector<std::vector<GroupHom>> horiz, vert;
    for (std::size_t q = 0; q < qm; ++q) {
        std::vector<GroupHom> row;
        for (std::size_t p = 0; p <= pm; ++p) row.push_back(vert_[p][q]);
        horiz.push_back(std::move(row));
    }
    for (std::size_t q = 0; q <= qm; ++q) {
        std::vector<GroupHom> row;
        for (std::size_t p = 0; p < pm; ++p) row.push_back(horiz_[p][q]);
        vert.push_back(std::move(row));
    }
    return DoubleComplex(std::move(cells), std::move(horiz), std::move(vert));
}

// -- Total complex ------------------------------------------------------------

TotalComplex total_complex(const DoubleComplex& k, bool use_sign) {
    const std::size_t pm = k.pmax(), qm = k.qmax(), nmax = pm + qm;

    std::vector<std::vector<TotalCell>> layout(nmax + 1);
    std::vector<FpGroup> terms;
    for (std::size_t n = 0; n <= nmax; ++n) {
        std::vector<FpGroup> parts;
        std::size_t off = 0;
        std::size_t plo = (n > qm) ? n - qm : 0;
        for (std::size_t p = plo; p <= pm && p <= n; ++p) {
            layout[n].push_back(TotalCell{p, n - p, off});
            parts.push_back(k.cell(p, n - p));
            off += k.cell(p, n - p).gens();
        }
        terms.push_back(direct_sum(parts));
    }

    auto place = [&](IntMatrix& m, const IntMatrix& block, std::size_t r0, std::size_t c0,
                     int sign) {
        for (std::size_t i = 0; i < block.rows(); ++i)
            for (std::size_t j = 0; j < block.cols(); ++j)
                m.at(r0 + i, c0 + j) = sign * block.at(i, j);
    };
    auto offset_of = [&](std::size_t n, std::size_t p) -> std::size_t {
        for (const TotalCell& c : layout[n])
            if (c.p == p) return c.offset;
        throw std::logic_error("cell missing from total-complex layout");
    };

    std::vector<GroupHom> diffs;
    for (std::size_t n = 0; n < nmax; ++n) {
        IntMatrix m(terms[n + 1].gens(), terms[n].gens());
        for (const TotalCell& c : layout[n]) {
            if (c.p < pm)
                place(m, k.horizontal(c.p, c.q).matrix(), offset_of(n + 1, c.p + 1), c.offset, 1);
            if (c.q < qm) {
                int sign = (use_sign && c.p % 2 == 1) ? -1 : 1;
                place(m, k.vertical(c.p, c.q).matrix(), offset_of(n + 1, c.p), c.offset, sign);
            }
        }
        diffs.push_back(GroupHom(terms[n], terms[n + 1], m));
    }

    for (std::size_t n = 0; n + 1 < diffs.size(); ++n)
        if (!diffs[n + 1].compose_after(diffs[n]).is_zero_hom())
            fail(ErrorKind::SignViolation,
                 "total differential does not square to zero at degree " + std::to_string(n));

    return TotalComplex{GroupComplex(std::move(terms), std::move(diffs)), std::move(layout)};
}

// -- Spectral sequence --------------------------------------------------------

namespace {

// Everything lives in the free ambients Z^{gens(T^n)} of the total complex;
// subgroups are column lattices that always include the relation columns.
struct FiltrationData {
    std::size_t pm, qm, nmax;
    std::vector<std::size_t> gens;   // per degree
    std::vector<IntMatrix> rels;     // relation columns per degree
    std::vector<IntMatrix> d;        // D_n, n < nmax
    // lat[p][n]: lattice of F_p in degree n; p runs 0..pm+1 (pm+1 is the
    // zero filtration step, only relations)
    std::vector<std::vector<IntMatrix>> lat;
    // z[pa][pb][n]: lattice of { x in F_pa : D x in F_pb }
    std::vector<std::vector<std::vector<IntMatrix>>> z;

    std::size_t clamp(long long p) const {
        if (p < 0) return 0;
        return std::min<std::size_t>((std::size_t)p, pm + 1);
    }
    const IntMatrix& zm(long long pa, long long pb, std::size_t n) const {
        return z[clamp(pa)][clamp(pb)][n];
    }
};

FiltrationData build_filtration(const DoubleComplex& k, const TotalComplex& t) {
    FiltrationData f;
    f.pm = k.pmax();
    f.qm = k.qmax();
    f.nmax = f.pm + f.qm;
    for (std::size_t n = 0; n <= f.nmax; ++n) {
        f.gens.push_back(t.complex.terms()[n].gens());
        f.rels.push_back(t.complex.terms()[n].relation_cols());
        if (n < f.nmax) f.d.push_back(t.complex.differentials()[n].matrix());
    }

    f.lat.assign(f.pm + 2, std::vector<IntMatrix>(f.nmax + 1));
    for (std::size_t p = 0; p <= f.pm + 1; ++p)
        for (std::size_t n = 0; n <= f.nmax; ++n) {
            IntMatrix cols(f.gens[n], 0);
            for (const TotalCell& c : t.layout[n])
                if (c.p >= p) {
                    IntMatrix unit(f.gens[n], k.cell(c.p, c.q).gens());
                    for (std::size_t j = 0; j < unit.cols(); ++j) unit.at(c.offset + j, j) = 1;
                    cols = cols.hstack(unit);
                }
            f.lat[p][n] = cols.hstack(f.rels[n]);
        }

    const long long pcount = (long long)f.pm + 2;
    const long long ncount = (long long)f.nmax + 1;
    f.z.assign(pcount, std::vector<std::vector<IntMatrix>>(pcount, std::vector<IntMatrix>(ncount)));
#pragma omp parallel for collapse(3) schedule(dynamic) if (parallel_enabled())
    for (long long pa = 0; pa < pcount; ++pa)
        for (long long pb = 0; pb < pcount; ++pb)
            for (long long n = 0; n < ncount; ++n) {
                const IntMatrix& src = f.lat[pa][n];
                if (pb <= pa || n == (long long)f.nmax) {
                    // D never lowers the filtration, and at the top degree
                    // there is no condition at all
                    f.z[pa][pb][n] = lattice_basis(src);
                    continue;
                }
                IntMatrix stacked = (f.d[n] * src).hstack(f.lat[pb][n + 1].negated());
                IntMatrix ker = kernel_basis(stacked);
                IntMatrix tpart = ker.submatrix(0, 0, src.cols(), ker.cols());
                f.z[pa][pb][n] = lattice_basis(src * tpart);
            }
    return f;
}

} // namespace

SpectralPages spectral_sequence(const DoubleComplex& k, Axis axis, std::size_t rmax) {
    if (axis == Axis::by_q) {
        SpectralPages pages = spectral_sequence(k.transposed(), Axis::by_p, rmax);
        pages.axis = Axis::by_q;
        return pages;
    }

    const std::size_t pm = k.pmax(), qm = k.qmax();
    const std::size_t rstar = std::max(pm, qm) + 2;
    if (rmax < rstar)
        fail(ErrorKind::NotStabilized, "pages requested through r = " + std::to_string(rmax) +
                                           " but stabilization needs r = " + std::to_string(rstar));

    TotalComplex t = total_complex(k);
    FiltrationData f = build_filtration(k, t);

    SpectralPages out;
    out.axis = Axis::by_p;
    out.pmax = pm;
    out.qmax = qm;
    out.rstar = rstar;
    out.total_cohomology = t.complex.cohomology();

    // E_r^{p,q} = Z_r(p) / (Z_{r-1}(p+1) + D Z_{r-1}(p-r+1)), with
    // Z_s(p) = { x in F_p : D x in F_{p+s} } and Z_{-1}(p) = F_p.
    auto cell_presented = [&](std::size_t r, std::size_t p, std::size_t q) -> Presented {
        const std::size_t n = p + q;
        const long long pr = (long long)p, rr = (long long)r;
        IntMatrix num = f.zm(pr, pr + rr, n);
        IntMatrix den = f.zm(pr + 1, pr + rr, n);
        if (n > 0) den = den.hstack(f.d[n - 1] * f.zm(pr - rr + 1, pr, n - 1));
        den = den.hstack(f.rels[n]);
        return subquotient(f.gens[n], num, den);
    };

    std::string deferred_error;
    std::vector<std::vector<Presented>> grid(pm + 1, std::vector<Presented>(qm + 1));
    for (std::size_t r = 0; r <= rmax; ++r) {
#pragma omp parallel for collapse(2) schedule(dynamic) if (parallel_enabled())
        for (long long p = 0; p <= (long long)pm; ++p)
            for (long long q = 0; q <= (long long)qm; ++q) {
                try {
                    grid[p][q] = cell_presented(r, p, q);
                } catch (const std::exception& e) {
#pragma omp critical
                    deferred_error = e.what();
                }
            }
        if (!deferred_error.empty())
            throw std::logic_error("spectral page computation failed: " + deferred_error);

        std::vector<std::vector<FpGroup>> page(pm + 1, std::vector<FpGroup>(qm + 1));
        for (std::size_t p = 0; p <= pm; ++p)
            for (std::size_t q = 0; q <= qm; ++q) page[p][q] = grid[p][q].group;
        out.pages.push_back(std::move(page));

        // d_r : (p,q) -> (p+r, q-r+1), induced by D on representatives
        std::map<std::pair<std::size_t, std::size_t>, GroupHom> diffs;
        for (std::size_t p = 0; p <= pm; ++p)
            for (std::size_t q = 0; q <= qm; ++q) {
                if (p + r > pm || q + 1 < r || q + 1 - r > qm) continue;
                const Presented& src = grid[p][q];
                const Presented& dst = grid[p + r][q + 1 - r];
                const std::size_t n = p + q;
                IntMatrix moved = f.d[n] * src.num;
                auto sol = lattice_solve_all(dst.num.hstack(dst.den), moved);
                if (!sol)
                    throw std::logic_error("page differential failed to lift");
                diffs.emplace(std::make_pair(p, q),
                              GroupHom(src.group, dst.group,
                                       sol->submatrix(0, 0, dst.group.gens(), src.group.gens())));
            }
        out.differentials.push_back(std::move(diffs));
    }
    out.einf = out.pages[rstar];

    // Graded pieces of H_D under the induced filtration:
    // gr_p H^n = Zinf(p) / (Zinf(p) meet (Zinf(p+1) + im D)).
    out.graded_total.assign(pm + 1, std::vector<FpGroup>(qm + 1));
#pragma omp parallel for collapse(2) schedule(dynamic) if (parallel_enabled())
    for (long long p = 0; p <= (long long)pm; ++p)
        for (long long q = 0; q <= (long long)qm; ++q) {
            try {
                const std::size_t n = p + q;
                IntMatrix num = f.zm(p, f.pm + 1, n);
                IntMatrix den_raw = f.zm(p + 1, f.pm + 1, n);
                if (n > 0) den_raw = den_raw.hstack(f.d[n - 1] * f.lat[0][n - 1]);
                den_raw = den_raw.hstack(f.rels[n]);
                IntMatrix den = lattice_intersect(num, den_raw);
                out.graded_total[p][q] = subquotient(f.gens[n], num, den).group;
            } catch (const std::exception& e) {
#pragma omp critical
                deferred_error = e.what();
            }
        }
    if (!deferred_error.empty())
        throw std::logic_error("graded limit computation failed: " + deferred_error);

    out.converged = true;
    for (std::size_t p = 0; p <= pm; ++p)
        for (std::size_t q = 0; q <= qm; ++q)
            if (!out.einf[p][q].same_invariants(out.graded_total[p][q])) out.converged = false;

    for (std::size_t n = 0; n <= pm + qm; ++n) {
        std::vector<FpGroup> parts;
        for (std::size_t p = 0; p <= pm && p <= n; ++p)
            if (n - p <= qm) parts.push_back(out.einf[p][n - p]);
        if (direct_sum(parts).torsion() != out.total_cohomology[n].torsion())
            out.extension_flags.push_back(n);
    }
    return out;
}

} // namespace finsheaf
