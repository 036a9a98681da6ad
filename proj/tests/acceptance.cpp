// End-to-end acceptance checks: each numbered case prints one PASS/FAIL line.
// Cases with a stated time budget fail if they run over it.
#include <chrono>
#include <cstdio>
#include <ctime>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "finsheaf/corpus.hpp"
#include "finsheaf/hyper.hpp"
#include "finsheaf/presheaf.hpp"

using namespace finsheaf;

namespace {

struct Case {
    std::string title;
    std::function<void(std::vector<std::string>&)> body; // push failure notes
    long budget_ms = 0;                                   // 0 = no budget
};

bool run_case(std::size_t idx, std::size_t total, const Case& c) {
    std::vector<std::string> notes;
    auto t0 = std::chrono::steady_clock::now();
    std::clock_t c0 = std::clock();
    try {
        c.body(notes);
    } catch (const std::exception& e) {
        notes.push_back(std::string("exception: ") + e.what());
    }
    long ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    // budgets pass if either wall or CPU time fits: wall time on a shared
    // single-core host includes scheduler steal from unrelated processes,
    // while CPU time overcounts when OpenMP fans out across real cores
    long cpu_ms = static_cast<long>((std::clock() - c0) * 1000.0 / CLOCKS_PER_SEC);
    if (c.budget_ms && ms > c.budget_ms && cpu_ms > c.budget_ms)
        notes.push_back("took " + std::to_string(ms) + " ms wall / " +
                        std::to_string(cpu_ms) + " ms CPU, budget " +
                        std::to_string(c.budget_ms) + " ms");
    bool ok = notes.empty();
    std::printf("[%2zu/%zu] %s %s (%ld ms)\n", idx, total, ok ? "PASS" : "FAIL",
                c.title.c_str(), ms);
    for (const auto& n : notes) std::printf("        - %s\n", n.c_str());
    std::fflush(stdout);
    return ok;
}

void expect(std::vector<std::string>& notes, bool cond, const std::string& msg) {
    if (!cond) notes.push_back(msg);
}

std::string inv(const FpGroup& g) { return g.render(); }

// ---- case bodies ------------------------------------------------------------

void degree_zero_is_sections(std::vector<std::string>& notes) {
    auto pairs = corpus::standard_pairs();
    expect(notes, pairs.size() >= 10, "corpus has fewer than 10 pairs");
    for (const auto& ns : pairs) {
        FpGroup h0 = sheaf_cohomology(ns.sheaf, 0)[0];
        FpGroup gl = sections(ns.sheaf, ns.sheaf.space().whole()).group;
        expect(notes, h0.same_invariants(gl),
               ns.space_name + "/" + ns.sheaf_name + ": H^0 = " + inv(h0) +
                   " but sections = " + inv(gl));
    }
}

void check_model(std::vector<std::string>& notes, const SpacePtr& x, const std::string& name,
                 const std::vector<std::size_t>& ranks) {
    Sheaf cz = constant_sheaf(x, FpGroup::free(1));
    std::size_t kmax = ranks.size() - 1;
    auto a = sheaf_cohomology(cz, kmax);
    auto b = lim_higher_oracle(cz, kmax);
    for (std::size_t k = 0; k <= kmax; ++k) {
        FpGroup want = FpGroup::free(ranks[k]);
        expect(notes, a[k].same_invariants(want),
               name + " degree " + std::to_string(k) + ": resolution gives " + inv(a[k]));
        expect(notes, b[k].same_invariants(want),
               name + " degree " + std::to_string(k) + ": oracle gives " + inv(b[k]));
    }
}

void circle_model(std::vector<std::string>& notes) {
    check_model(notes, corpus::pseudocircle(), "circle model", {1, 1, 0});
}

void sphere_model(std::vector<std::string>& notes) {
    check_model(notes, corpus::sphere6(), "sphere model", {1, 0, 1, 0});
}

void flasque_implies_acyclic(std::vector<std::string>& notes) {
    auto check_one = [&](const Sheaf& f, const std::string& label) {
        expect(notes, is_flasque(f), label + " is not flasque");
        auto h = sheaf_cohomology(f, 3);
        for (std::size_t k = 1; k <= 3; ++k)
            expect(notes, h[k].is_trivial(),
                   label + ": H^" + std::to_string(k) + " = " + inv(h[k]));
    };
    for (const auto& ns : corpus::standard_pairs()) {
        Resolution r = godement_resolution(ns.sheaf, 1); // terms C^0, C^1, C^2
        for (std::size_t k = 0; k < r.terms.size(); ++k)
            check_one(r.terms[k],
                      ns.space_name + "/" + ns.sheaf_name + " C^" + std::to_string(k));
    }
    for (const auto& ns : corpus::closed_skyscrapers())
        check_one(ns.sheaf, ns.space_name + "/" + ns.sheaf_name);
}

void page_convergence(std::vector<std::string>& notes) {
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<std::size_t> dim(0, 3);
    std::size_t checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        DoubleComplex k = corpus::random_double_complex(rng, dim(rng), dim(rng), 3);
        for (Axis axis : {Axis::by_p, Axis::by_q}) {
            std::string tag = "trial " + std::to_string(trial) +
                              (axis == Axis::by_p ? " by_p" : " by_q");
            std::size_t rmax = std::max(k.pmax(), k.qmax()) + 2;
            SpectralPages sp = spectral_sequence(k, axis, rmax);

            for (std::size_t r = 0; r < sp.differentials.size() && r + 1 < sp.pages.size(); ++r) {
                // bidegree (r, 1-r) with matching endpoints
                for (const auto& [src, d] : sp.differentials[r]) {
                    auto [p, q] = src;
                    bool endpoints = d.source() == sp.pages[r][p][q] &&
                                     p + r <= sp.pmax && q + 1 >= r &&
                                     q + 1 - r <= sp.qmax &&
                                     d.target() == sp.pages[r][p + r][q + 1 - r];
                    expect(notes, endpoints, tag + ": d_" + std::to_string(r) +
                                                 " bidegree mismatch at (" + std::to_string(p) +
                                                 "," + std::to_string(q) + ")");
                    if (!endpoints) return;
                }
                // page recurrence: E_{r+1} = H(E_r, d_r) cellwise
                for (std::size_t p = 0; p <= sp.pmax; ++p)
                    for (std::size_t q = 0; q <= sp.qmax; ++q) {
                        const FpGroup& here = sp.pages[r][p][q];
                        GroupHom out = GroupHom::zero(here, FpGroup::trivial());
                        auto oit = sp.differentials[r].find({p, q});
                        if (oit != sp.differentials[r].end()) out = oit->second;
                        GroupHom in = GroupHom::zero(FpGroup::trivial(), here);
                        if (p >= r && q + r <= sp.qmax + 1 && q + r >= 1) {
                            auto iit = sp.differentials[r].find({p - r, q + r - 1});
                            if (iit != sp.differentials[r].end()) in = iit->second;
                        }
                        FpGroup next = cohomology_at(in, out).group;
                        expect(notes, next.same_invariants(sp.pages[r + 1][p][q]),
                               tag + ": E_" + std::to_string(r + 1) + "(" + std::to_string(p) +
                                   "," + std::to_string(q) + ") = " +
                                   inv(sp.pages[r + 1][p][q]) + ", cohomology of E_" +
                                   std::to_string(r) + " gives " + inv(next));
                    }
            }
            // limit page against the filtration of the total cohomology
            for (std::size_t p = 0; p <= sp.pmax; ++p)
                for (std::size_t q = 0; q <= sp.qmax; ++q)
                    expect(notes, sp.einf[p][q].same_invariants(sp.graded_total[p][q]),
                           tag + ": einf(" + std::to_string(p) + "," + std::to_string(q) +
                               ") = " + inv(sp.einf[p][q]) + " vs graded " +
                               inv(sp.graded_total[p][q]));
            for (std::size_t n = 0; n < sp.total_cohomology.size(); ++n) {
                std::size_t sum = 0;
                for (std::size_t p = 0; p <= sp.pmax && p <= n; ++p)
                    if (n - p <= sp.qmax) sum += sp.einf[p][n - p].rank();
                expect(notes, sum == sp.total_cohomology[n].rank(),
                       tag + ": graded ranks in degree " + std::to_string(n) + " sum to " +
                           std::to_string(sum) + ", total has rank " +
                           std::to_string(sp.total_cohomology[n].rank()));
            }
            ++checked;
            if (!notes.empty()) return;
        }
    }
    expect(notes, checked == 200, "expected 200 spectral-sequence runs");
}

void hyper_degeneration(std::vector<std::string>& notes) {
    for (const auto& ns : corpus::standard_pairs()) {
        std::string tag = ns.space_name + "/" + ns.sheaf_name;
        std::size_t kmax = std::min<std::size_t>(ns.sheaf.space().height() + 1, 2);
        Hypercohomology hh = hypercohomology(corpus::single_complex(ns.sheaf), kmax);
        auto h = sheaf_cohomology(ns.sheaf, kmax);
        for (std::size_t k = 0; k <= kmax; ++k)
            expect(notes, hh.groups[k].same_invariants(h[k]),
                   tag + " degree " + std::to_string(k) + ": " + inv(hh.groups[k]) + " vs " +
                       inv(h[k]));
        // E_1 of the filtration-by-p run lives in the zero row
        const auto& e1 = hh.by_p.pages[1];
        for (std::size_t p = 0; p < e1.size(); ++p)
            for (std::size_t q = 1; q < e1[p].size(); ++q)
                expect(notes, e1[p][q].is_trivial(),
                       tag + ": E_1(" + std::to_string(p) + "," + std::to_string(q) +
                           ") = " + inv(e1[p][q]));
        // degeneration at E_2: the second page already equals the limit
        const auto& e2 = hh.by_p.pages[2];
        for (std::size_t p = 0; p < e2.size(); ++p)
            for (std::size_t q = 0; q < e2[p].size(); ++q)
                expect(notes, e2[p][q].same_invariants(hh.by_p.einf[p][q]),
                       tag + ": E_2(" + std::to_string(p) + "," + std::to_string(q) +
                           ") differs from the limit page");
        expect(notes, hh.by_p.extension_flags.empty(), tag + ": extension flags raised");
        expect(notes, hh.by_p.converged && hh.by_q.converged, tag + ": not converged");
    }
}

void resolution_checker(std::vector<std::string>& notes) {
    for (const auto& ns : corpus::standard_pairs()) {
        std::string tag = ns.space_name + "/" + ns.sheaf_name;
        // the checker builds a resolution of each resolution term, so the degree
        // window is narrowed on the largest space to keep memory bounded
        std::size_t kmax = std::min<std::size_t>(ns.sheaf.space().height() + 1, 2);
        if (ns.sheaf.space().size() > 4) kmax = 1;
        SheafResolution r = as_resolution(godement_resolution(ns.sheaf, kmax));
        AcyclicReport rep = acyclic_resolution_check(ns.sheaf, r, kmax);
        expect(notes, rep.verdict, tag + ": canonical resolution rejected");
        expect(notes, rep.row_pattern_ok && rep.column_pattern_ok,
               tag + ": degeneration patterns not confirmed");
    }
    // hand-built flasque resolutions, not of Godement type
    for (const std::string& name : {"sierpinski_skyscrapers", "pseudocircle_skyscrapers"}) {
        SheafResolution r = corpus::resolution_by_name(name, 2);
        AcyclicReport rep = acyclic_resolution_check(r.base, r, 2);
        expect(notes, rep.verdict, name + ": rejected");
    }
    // constant Z on the circle model as a resolution term: exact but not acyclic
    SheafResolution bad = corpus::pseudocircle_nonacyclic_resolution(2);
    AcyclicReport rep = acyclic_resolution_check(bad.base, bad, 2);
    expect(notes, !rep.all_acyclic && !rep.verdict, "non-acyclic term accepted");
    bool named = !rep.acyclic_failures.empty() &&
                 rep.acyclic_failures.front() == std::pair<std::size_t, std::size_t>{0, 1};
    expect(notes, named, "offending (term, degree) not reported as (0, 1)");
    expect(notes, !rep.column_pattern_ok, "column degeneration claimed despite the bad term");
}

void left_exactness_witness(std::vector<std::string>& notes) {
    SpacePtr circ = corpus::pseudocircle();
    Sheaf cz = constant_sheaf(circ, FpGroup::free(1));
    GodementStep step = godement_step(cz);
    LeftExactnessReport rep =
        sections_left_exactness(step.unit, step.projection, circ->whole());
    expect(notes, rep.left_exact, "0 -> F(X) -> C0F(X) -> Q(X) is not exact on the left");
    expect(notes, !rep.surjective, "C0F(X) -> Q(X) is unexpectedly onto");
    FpGroup h1 = sheaf_cohomology(cz, 1)[1];
    expect(notes, rep.cokernel.same_invariants(h1),
           "cokernel " + inv(rep.cokernel) + " differs from H^1 = " + inv(h1));
    expect(notes, h1.same_invariants(FpGroup::free(1)), "H^1 of the circle model is not Z");
}

void exact_algebra_suite(std::vector<std::string>& notes) {
    std::mt19937_64 rng(97);
    std::uniform_int_distribution<int> dim(1, 6), entry(-20, 20);
    for (int t = 0; t < 200; ++t) {
        std::size_t r = dim(rng), c = dim(rng);
        IntMatrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m.at(i, j) = entry(rng);
        SnfResult snf = smith_normal_form(m);
        std::string tag = "matrix " + std::to_string(t);
        expect(notes, snf.u * m * snf.v == snf.s, tag + ": U M V != S");
        Int du = det(snf.u), dv = det(snf.v);
        expect(notes, (du == 1 || du == -1) && (dv == 1 || dv == -1),
               tag + ": transform not unimodular");
        auto d = snf.diagonal();
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
            bool ok = d[i] == 0 ? d[i + 1] == 0 : d[i + 1] % d[i] == 0;
            expect(notes, ok && d[i] >= 0, tag + ": diagonal not a divisibility chain");
        }
        // kernel -> source -> image -> target -> cokernel is exact
        GroupHom f(FpGroup::free(c), FpGroup::free(r), m);
        HomParts parts = hom_parts(f);
        expect(notes, cohomology_at(parts.kernel_inclusion, f).group.is_trivial(),
               tag + ": sequence not exact at the source");
        expect(notes,
               cohomology_at(parts.image_inclusion, parts.cokernel_projection).group.is_trivial(),
               tag + ": sequence not exact at the target");
        if (!notes.empty()) return;
    }
}

void axiom_checker(std::vector<std::string>& notes) {
    // globally-constant functions on a 2-component space: uniqueness holds,
    // gluing fails on the cover by the components
    SpacePtr two = corpus::discrete_two();
    PresheafTable p = constant_functions_table(two, FpGroup::free(1));
    std::vector<FiniteSpace::Mask> comps{two->minimal_open(0), two->minimal_open(1)};
    AxiomReport rep = check_sheaf_axioms(p, two->whole(), comps);
    expect(notes, rep.uniqueness, "counterexample unexpectedly fails uniqueness");
    expect(notes, !rep.gluing, "counterexample unexpectedly satisfies gluing");

    for (const auto& ns : corpus::standard_pairs()) {
        const FiniteSpace& x = ns.sheaf.space();
        PresheafTable t = table_of_sheaf(ns.sheaf);
        std::vector<FiniteSpace::Mask> cover;
        for (std::size_t q = 0; q < x.size(); ++q) cover.push_back(x.minimal_open(q));
        AxiomReport r = check_sheaf_axioms(t, x.whole(), cover);
        expect(notes, r.uniqueness && r.gluing,
               ns.space_name + "/" + ns.sheaf_name + " fails the axiom check");
    }
}

} // namespace

int main() {
    std::vector<Case> cases = {
        {"degree-zero cohomology equals global sections on the corpus",
         degree_zero_is_sections, 1000},
        {"circle model: constant Z gives (Z, Z, 0) by both pipelines", circle_model, 1000},
        {"sphere model: constant Z gives (Z, 0, Z, 0) by both pipelines", sphere_model, 5000},
        {"flasque sheaves (canonical terms, closed skyscrapers) are acyclic",
         flasque_implies_acyclic, 0},
        {"spectral pages: recurrence, bidegree, limit on 100 random double complexes",
         page_convergence, 60000},
        {"hypercohomology of a single sheaf degenerates at the second page",
         hyper_degeneration, 0},
        {"resolution checker accepts flasque resolutions, names non-acyclic terms",
         resolution_checker, 0},
        {"left exactness of sections with the degree-one cokernel witness",
         left_exactness_witness, 0},
        {"integer matrix suite: normal form identities and exact sequences on 200 samples",
         exact_algebra_suite, 10000},
        {"axiom checker: gluing counterexample and corpus sheaves", axiom_checker, 0},
    };
    std::size_t failures = 0;
    for (std::size_t i = 0; i < cases.size(); ++i)
        if (!run_case(i + 1, cases.size(), cases[i])) ++failures;
    if (failures) {
        std::printf("%zu of %zu checks failed\n", failures, cases.size());
        return 1;
    }
    std::printf("all %zu checks passed\n", cases.size());
    return 0;
}
