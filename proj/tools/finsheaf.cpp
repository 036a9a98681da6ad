#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "finsheaf/corpus.hpp"
#include "finsheaf/io.hpp"
#include "finsheaf/presheaf.hpp"

using nlohmann::json;
using namespace finsheaf;

namespace {

struct CapViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string space, sheaf, complex, resolution;
    std::size_t max_degree = 2;
    std::string axis = "p";
    std::size_t pages = 0; // 0 = pick the stabilization page
    std::string format = "text";
    std::size_t max_opens = 4096;
    std::size_t max_points = 12;
    std::size_t degree_cap = 8;
    std::size_t pages_cap = 12;
    std::vector<std::string> args; // corpus positional
};

json group_json(const FpGroup& g) {
    json t = json::array();
    for (const Int& d : g.torsion()) t.push_back(d.get_str());
    return json{{"pretty", g.render()}, {"rank", g.rank()}, {"torsion", std::move(t)}};
}

json groups_json(const std::vector<FpGroup>& gs) {
    json a = json::array();
    for (const FpGroup& g : gs) a.push_back(group_json(g));
    return a;
}

json page_json(const std::vector<std::vector<FpGroup>>& page) {
    json t;
    for (std::size_t p = 0; p < page.size(); ++p)
        for (std::size_t q = 0; q < page[p].size(); ++q)
            if (!page[p][q].is_trivial())
                t[std::to_string(p) + "," + std::to_string(q)] = group_json(page[p][q]);
    return t.is_null() ? json::object() : t;
}

json pages_json(const SpectralPages& sp, std::size_t upto) {
    json j;
    j["axis"] = sp.axis == Axis::by_p ? "p" : "q";
    j["stabilizes_at"] = sp.rstar;
    json pages;
    for (std::size_t r = 1; r <= upto && r < sp.pages.size(); ++r)
        pages["E" + std::to_string(r)] = page_json(sp.pages[r]);
    j["pages"] = std::move(pages);
    j["einf"] = page_json(sp.einf);
    j["graded_total"] = page_json(sp.graded_total);
    j["total_cohomology"] = groups_json(sp.total_cohomology);
    j["extension_flags"] = sp.extension_flags;
    j["converged"] = sp.converged;
    return j;
}

void render_text(const json& j, const std::string& prefix, std::ostream& os) {
    if (j.is_object()) {
        if (j.empty() && !prefix.empty()) os << prefix << ": {}\n";
        for (auto it = j.begin(); it != j.end(); ++it)
            render_text(*it, prefix.empty() ? it.key() : prefix + "." + it.key(), os);
    } else if (j.is_array()) {
        if (j.empty()) os << prefix << ": []\n";
        for (std::size_t i = 0; i < j.size(); ++i)
            render_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
    } else {
        os << prefix << ": " << j.dump() << "\n";
    }
}

void check_space_caps(const FiniteSpace& x, const Options& opt) {
    if (x.size() > opt.max_points)
        throw CapViolation("space has " + std::to_string(x.size()) + " points; cap is " +
                           std::to_string(opt.max_points));
    x.enumerate_opens(opt.max_opens); // throws TooManyOpens past the cap
}

// a --space/--sheaf/--complex value is a file path if it exists, otherwise a
// bundled corpus name
bool is_file(const std::string& v) { return std::filesystem::exists(v); }

struct LoadedSpace {
    SpacePtr space;
    json echo;
};

LoadedSpace resolve_space(const std::string& val, const Options& opt) {
    LoadedSpace out;
    if (is_file(val)) {
        WorkspaceFile w = load_workspace(val);
        if (w.kind != FileKind::Space)
            fail(ErrorKind::SchemaError, val + ": expected a space file");
        out.space = w.space;
        out.echo = json{{"file", val}, {"digest", digest_hex(serialize(w))}};
    } else {
        out.space = corpus::space_by_name(val);
        out.echo = json{{"corpus", val}};
    }
    check_space_caps(*out.space, opt);
    return out;
}

struct LoadedSheaf {
    SpacePtr space;
    std::optional<Sheaf> sheaf;
    json echo;
};

LoadedSheaf resolve_sheaf(const Options& opt) {
    LoadedSheaf out;
    if (is_file(opt.sheaf)) {
        WorkspaceFile w = load_workspace(opt.sheaf);
        if (w.kind != FileKind::Sheaf)
            fail(ErrorKind::SchemaError, opt.sheaf + ": expected a sheaf file");
        out.space = w.space;
        out.sheaf = w.sheaf;
        out.echo = json{{"file", opt.sheaf}, {"digest", digest_hex(serialize(w))}};
        check_space_caps(*out.space, opt);
        return out;
    }
    if (opt.space.empty())
        fail(ErrorKind::SchemaError, "--sheaf names a bundled sheaf, so --space is required");
    LoadedSpace sp = resolve_space(opt.space, opt);
    out.space = sp.space;
    out.sheaf = corpus::sheaf_by_name(sp.space, opt.sheaf);
    out.echo = json{{"corpus", opt.sheaf}, {"space", sp.echo}};
    return out;
}

struct LoadedComplex {
    std::optional<SheafComplex> complex;
    json echo;
};

LoadedComplex resolve_sheaf_complex(const Options& opt) {
    LoadedComplex out;
    if (is_file(opt.complex)) {
        WorkspaceFile w = load_workspace(opt.complex);
        if (w.kind != FileKind::Complex)
            fail(ErrorKind::SchemaError, opt.complex + ": expected a sheaf-complex file");
        check_space_caps(*w.space, opt);
        out.complex = w.complex;
        out.echo = json{{"file", opt.complex}, {"digest", digest_hex(serialize(w))}};
        return out;
    }
    // bundled: "single_<sheaf>" on --space
    if (opt.complex.rfind("single_", 0) == 0) {
        if (opt.space.empty())
            fail(ErrorKind::SchemaError, "bundled complexes need --space");
        LoadedSpace sp = resolve_space(opt.space, opt);
        Sheaf f = corpus::sheaf_by_name(sp.space, opt.complex.substr(7));
        out.complex = corpus::single_complex(f);
        out.echo = json{{"corpus", opt.complex}, {"space", sp.echo}};
        return out;
    }
    fail(ErrorKind::SchemaError, "unknown complex '" + opt.complex + "'");
}

std::size_t checked_degree(const Options& opt) {
    if (opt.max_degree > opt.degree_cap)
        throw CapViolation("degree " + std::to_string(opt.max_degree) + " exceeds the cap " +
                           std::to_string(opt.degree_cap));
    return opt.max_degree;
}

int emit(const json& report, const Options& opt,
         std::chrono::steady_clock::time_point started) {
    json out = report;
    out["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();
    if (opt.format == "json")
        std::cout << out.dump(2) << "\n";
    else
        render_text(out, "", std::cout);
    return 0;
}

int cmd_check(const Options& opt, std::chrono::steady_clock::time_point started) {
    json rep;
    rep["command"] = "check";
    rep["report_version"] = 1;
    if (!opt.sheaf.empty()) {
        LoadedSheaf ls = resolve_sheaf(opt);
        rep["inputs"] = json{{"sheaf", ls.echo}};
        rep["results"]["points"] = ls.space->size();
        rep["results"]["opens"] = ls.space->enumerate_opens(opt.max_opens).size();
        PresheafTable table = table_of_sheaf(*ls.sheaf, opt.max_opens);
        std::vector<FiniteSpace::Mask> cover;
        for (std::size_t p = 0; p < ls.space->size(); ++p)
            cover.push_back(ls.space->minimal_open(p));
        AxiomReport ax = check_sheaf_axioms(table, ls.space->whole(), cover);
        rep["verdicts"]["uniqueness"] = ax.uniqueness;
        rep["verdicts"]["gluing"] = ax.gluing;
        rep["verdicts"]["is_sheaf"] = ax.uniqueness && ax.gluing;
    } else {
        LoadedSpace sp = resolve_space(opt.space, opt);
        rep["inputs"] = json{{"space", sp.echo}};
        rep["results"]["points"] = sp.space->size();
        rep["results"]["opens"] = sp.space->enumerate_opens(opt.max_opens).size();
        rep["results"]["height"] = sp.space->height();
        rep["verdicts"]["valid"] = true;
    }
    return emit(rep, opt, started);
}

int cmd_cohomology(const Options& opt, std::chrono::steady_clock::time_point started) {
    LoadedSheaf ls = resolve_sheaf(opt);
    std::size_t kmax = checked_degree(opt);
    std::vector<FpGroup> h = sheaf_cohomology(*ls.sheaf, kmax);
    std::vector<FpGroup> oracle = lim_higher_oracle(*ls.sheaf, kmax);
    bool agrees = true;
    for (std::size_t k = 0; k <= kmax; ++k)
        if (!h[k].same_invariants(oracle[k])) agrees = false;
    json rep;
    rep["command"] = "cohomology";
    rep["report_version"] = 1;
    rep["inputs"] = json{{"sheaf", ls.echo}, {"max_degree", kmax}};
    rep["results"]["groups"] = groups_json(h);
    rep["results"]["oracle"] = groups_json(oracle);
    rep["verdicts"]["oracle_agrees"] = agrees;
    return emit(rep, opt, started);
}

int cmd_flasque(const Options& opt, std::chrono::steady_clock::time_point started) {
    LoadedSheaf ls = resolve_sheaf(opt);
    json rep;
    rep["command"] = "flasque";
    rep["report_version"] = 1;
    rep["inputs"] = json{{"sheaf", ls.echo}};
    rep["verdicts"]["is_flasque"] = is_flasque(*ls.sheaf, opt.max_opens);
    return emit(rep, opt, started);
}

int cmd_hyper(const Options& opt, std::chrono::steady_clock::time_point started) {
    LoadedComplex lc = resolve_sheaf_complex(opt);
    std::size_t kmax = checked_degree(opt);
    Hypercohomology h = hypercohomology(*lc.complex, kmax);
    json rep;
    rep["command"] = "hyper";
    rep["report_version"] = 1;
    rep["inputs"] = json{{"complex", lc.echo}, {"max_degree", kmax}};
    rep["results"]["groups"] = groups_json(h.groups);
    rep["results"]["by_p"] = pages_json(h.by_p, 2);
    rep["results"]["by_q"] = pages_json(h.by_q, 2);
    rep["verdicts"]["converged_by_p"] = h.by_p.converged;
    rep["verdicts"]["converged_by_q"] = h.by_q.converged;
    return emit(rep, opt, started);
}

int cmd_ss(const Options& opt, std::chrono::steady_clock::time_point started) {
    if (!is_file(opt.complex))
        fail(ErrorKind::SchemaError, "ss needs --complex pointing at a double-complex file");
    WorkspaceFile w = load_workspace(opt.complex);
    if (w.kind != FileKind::Double)
        fail(ErrorKind::SchemaError, opt.complex + ": expected a double-complex file");
    const DoubleComplex& dc = *w.dcomplex;
    Axis axis = (opt.axis == "q") ? Axis::by_q : Axis::by_p;
    std::size_t rmax = opt.pages ? opt.pages : std::max(dc.pmax(), dc.qmax()) + 2;
    if (rmax > opt.pages_cap)
        throw CapViolation("page " + std::to_string(rmax) + " exceeds the cap " +
                           std::to_string(opt.pages_cap));
    SpectralPages sp = spectral_sequence(dc, axis, rmax);
    json rep;
    rep["command"] = "ss";
    rep["report_version"] = 1;
    rep["inputs"] = json{{"complex", json{{"file", opt.complex}, {"digest", digest_hex(serialize(w))}}},
                         {"axis", opt.axis},
                         {"pages", rmax}};
    rep["results"] = pages_json(sp, rmax);
    rep["verdicts"]["converged"] = sp.converged;
    return emit(rep, opt, started);
}

int cmd_resolve(const Options& opt, std::chrono::steady_clock::time_point started) {
    LoadedSheaf ls = resolve_sheaf(opt);
    std::size_t kmax = checked_degree(opt);
    Resolution res = godement_resolution(*ls.sheaf, kmax);
    json rep;
    rep["command"] = "resolve";
    rep["report_version"] = 1;
    rep["inputs"] = json{{"sheaf", ls.echo}, {"max_degree", kmax}};
    json terms = json::array();
    for (std::size_t k = 0; k < res.terms.size(); ++k) {
        json t;
        t["degree"] = k;
        json stalks;
        for (std::size_t p = 0; p < ls.space->size(); ++p)
            stalks[ls.space->point_name(p)] = group_json(res.terms[k].stalk(p));
        t["stalks"] = std::move(stalks);
        t["flasque"] = is_flasque(res.terms[k], opt.max_opens);
        terms.push_back(std::move(t));
    }
    rep["results"]["terms"] = std::move(terms);
    std::vector<SheafHom> maps;
    maps.push_back(res.augmentation);
    for (const SheafHom& d : res.differentials) maps.push_back(d);
    rep["verdicts"]["exact"] = is_exact_sequence(maps).exact;
    return emit(rep, opt, started);
}

int cmd_acyclic(const Options& opt, std::chrono::steady_clock::time_point started) {
    std::size_t kmax = checked_degree(opt);
    json inputs;
    std::optional<Sheaf> base;
    std::optional<SheafResolution> res;
    if (!opt.resolution.empty()) {
        res = corpus::resolution_by_name(opt.resolution, kmax);
        base = res->base;
        inputs = json{{"resolution", opt.resolution}, {"max_degree", kmax}};
        check_space_caps(base->space(), opt);
    } else {
        LoadedSheaf ls = resolve_sheaf(opt);
        base = ls.sheaf;
        res = as_resolution(godement_resolution(*ls.sheaf, kmax));
        inputs = json{{"sheaf", ls.echo}, {"max_degree", kmax}, {"resolution", "godement"}};
    }
    AcyclicReport r = acyclic_resolution_check(*base, *res, kmax);
    json rep;
    rep["command"] = "acyclic-check";
    rep["report_version"] = 1;
    rep["inputs"] = std::move(inputs);
    rep["results"]["h_sections"] = groups_json(r.h_sections);
    rep["results"]["h_sheaf"] = groups_json(r.h_sheaf);
    json fails = json::array();
    for (auto [q, k] : r.acyclic_failures)
        fails.push_back(json{{"term", q}, {"degree", k}});
    rep["results"]["acyclic_failures"] = std::move(fails);
    rep["verdicts"]["all_acyclic"] = r.all_acyclic;
    rep["verdicts"]["isomorphic"] = r.isomorphic;
    rep["verdicts"]["verdict"] = r.verdict;
    rep["verdicts"]["row_pattern"] = r.row_pattern_ok;
    rep["verdicts"]["column_pattern"] = r.column_pattern_ok;
    return emit(rep, opt, started);
}

int cmd_corpus(const Options& opt, std::chrono::steady_clock::time_point started) {
    std::string action = opt.args.empty() ? "list" : opt.args[0];
    json rep;
    rep["command"] = "corpus";
    rep["report_version"] = 1;
    if (action == "list") {
        rep["results"]["spaces"] = corpus::space_names();
        json pairs = json::array();
        for (const auto& ns : corpus::standard_pairs())
            pairs.push_back(ns.space_name + "/" + ns.sheaf_name);
        rep["results"]["pairs"] = std::move(pairs);
        rep["results"]["resolutions"] = corpus::resolution_names();
        return emit(rep, opt, started);
    }
    if (action == "export") {
        if (opt.args.size() < 2) fail(ErrorKind::SchemaError, "corpus export needs a directory");
        std::filesystem::path dir(opt.args[1]);
        std::filesystem::create_directories(dir);
        auto put = [&](const std::string& name, const std::string& bytes) {
            std::ofstream out(dir / name, std::ios::binary);
            out << bytes;
        };
        for (const std::string& name : corpus::space_names())
            put(name + ".json", serialize_space(*corpus::space_by_name(name)));
        put("pseudocircle_constZ.json",
            serialize_sheaf(corpus::sheaf_by_name(corpus::pseudocircle(), "constZ")));
        put("sierpinski_constZ.json",
            serialize_sheaf(corpus::sheaf_by_name(corpus::sierpinski(), "constZ")));
        put("pseudocircle_sky_c.json",
            serialize_sheaf(corpus::sheaf_by_name(corpus::pseudocircle(), "sky:c")));
        put("pseudocircle_single_constZ.json",
            serialize_complex(corpus::single_complex(
                corpus::sheaf_by_name(corpus::pseudocircle(), "constZ"))));
        std::mt19937_64 rng(7);
        put("sample_double.json",
            serialize_double_complex(corpus::random_double_complex(rng, 2, 2, 3)));
        rep["results"]["exported_to"] = dir.string();
        return emit(rep, opt, started);
    }
    if (action == "run") {
        json runs = json::array();
        bool all_ok = true;
        for (const auto& ns : corpus::standard_pairs()) {
            std::size_t kmax = std::min<std::size_t>(ns.sheaf.space().height() + 1, 3);
            std::vector<FpGroup> h = sheaf_cohomology(ns.sheaf, kmax);
            std::vector<FpGroup> oracle = lim_higher_oracle(ns.sheaf, kmax);
            bool h0 = h[0].same_invariants(sections(ns.sheaf, ns.sheaf.space().whole()).group);
            bool agrees = true;
            for (std::size_t k = 0; k <= kmax; ++k)
                if (!h[k].same_invariants(oracle[k])) agrees = false;
            all_ok = all_ok && h0 && agrees;
            runs.push_back(json{{"pair", ns.space_name + "/" + ns.sheaf_name},
                                {"groups", groups_json(h)},
                                {"h0_is_sections", h0},
                                {"oracle_agrees", agrees}});
        }
        for (const auto& ns : corpus::closed_skyscrapers()) {
            bool fl = is_flasque(ns.sheaf, opt.max_opens);
            all_ok = all_ok && fl;
            runs.push_back(json{{"pair", ns.space_name + "/" + ns.sheaf_name},
                                {"is_flasque", fl}});
        }
        for (const std::string& name : corpus::resolution_names()) {
            SheafResolution r = corpus::resolution_by_name(name, 1);
            AcyclicReport rep2 = acyclic_resolution_check(r.base, r, 1);
            runs.push_back(json{{"resolution", name},
                                {"verdict", rep2.verdict},
                                {"all_acyclic", rep2.all_acyclic}});
        }
        rep["results"]["runs"] = std::move(runs);
        rep["verdicts"]["corpus_ok"] = all_ok;
        return emit(rep, opt, started);
    }
    fail(ErrorKind::SchemaError, "corpus action must be list, run, or export");
}

} // namespace

int main(int argc, char** argv) {
    auto started = std::chrono::steady_clock::now();
    Options opt;
    if (const char* env = std::getenv("FINSHEAF_MAX_OPENS")) opt.max_opens = std::strtoull(env, nullptr, 10);

    CLI::App app{"exact sheaf cohomology on finite spaces"};
    app.require_subcommand(1);

    std::map<std::string, CLI::App*> subs;
    for (const char* name : {"check", "cohomology", "flasque", "hyper", "ss", "resolve",
                             "acyclic-check", "corpus"}) {
        CLI::App* s = app.add_subcommand(name);
        s->add_option("--space", opt.space, "space file or bundled name");
        s->add_option("--sheaf", opt.sheaf, "sheaf file or bundled name");
        s->add_option("--complex", opt.complex, "complex file or bundled name");
        s->add_option("--resolution", opt.resolution, "bundled resolution name");
        s->add_option("--max-degree", opt.max_degree, "top cohomological degree");
        s->add_option("--axis", opt.axis)->check(CLI::IsMember({"p", "q"}));
        s->add_option("--pages", opt.pages, "pages to compute");
        s->add_option("--format", opt.format)->check(CLI::IsMember({"text", "json"}));
        s->add_option("--max-opens", opt.max_opens, "open-set enumeration cap");
        s->add_option("--max-points", opt.max_points, "point-count cap");
        s->add_option("--degree-cap", opt.degree_cap, "degree cap");
        s->add_option("--pages-cap", opt.pages_cap, "page cap");
        if (std::string(name) == "corpus")
            s->add_option("args", opt.args, "action: list | run | export DIR");
        subs[name] = s;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (subs["check"]->parsed()) return cmd_check(opt, started);
        if (subs["cohomology"]->parsed()) return cmd_cohomology(opt, started);
        if (subs["flasque"]->parsed()) return cmd_flasque(opt, started);
        if (subs["hyper"]->parsed()) return cmd_hyper(opt, started);
        if (subs["ss"]->parsed()) return cmd_ss(opt, started);
        if (subs["resolve"]->parsed()) return cmd_resolve(opt, started);
        if (subs["acyclic-check"]->parsed()) return cmd_acyclic(opt, started);
        if (subs["corpus"]->parsed()) return cmd_corpus(opt, started);
        return 2;
    } catch (const CapViolation& e) {
        json err{{"error", {{"kind", "CapViolation"}, {"message", e.what()}}}};
        if (opt.format == "json")
            std::cout << err.dump(2) << "\n";
        else
            std::cerr << "error: cap violation: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        bool cap = e.kind() == ErrorKind::TooManyOpens;
        json err{{"error", {{"kind", error_kind_name(e.kind())}, {"message", e.what()}}}};
        if (opt.format == "json")
            std::cout << err.dump(2) << "\n";
        else
            std::cerr << "error: " << e.what() << "\n";
        return cap ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
