#include "finsheaf/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "finsheaf/corpus.hpp"

namespace finsheaf {

using nlohmann::json;

namespace {

json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return (long long)v.get_si();
    return v.get_str();
}

Int json_to_int(const json& j, const std::string& path) {
    if (j.is_number_integer() || j.is_number_unsigned())
        return Int(std::to_string(j.get<long long>()));
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            fail(ErrorKind::SchemaError, path + ": not an integer literal");
        }
    }
    fail(ErrorKind::SchemaError, path + ": expected an integer (number or string)");
}

json matrix_to_json(const IntMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(int_to_json(m.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

IntMatrix json_to_matrix(const json& j, std::size_t rows, std::size_t cols,
                         const std::string& path) {
    if (!j.is_array() || j.size() != rows)
        fail(ErrorKind::SchemaError, path + ": expected " + std::to_string(rows) + " rows");
    IntMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            fail(ErrorKind::SchemaError,
                 path + "/" + std::to_string(i) + ": expected " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c)
            m.at(i, c) = json_to_int(j[i][c], path + "/" + std::to_string(i));
    }
    return m;
}

// relation matrices come in without a known row count
IntMatrix json_to_relations(const json& j, std::size_t gens, const std::string& path) {
    if (!j.is_array()) fail(ErrorKind::SchemaError, path + ": expected an array of relations");
    return json_to_matrix(j, j.size(), gens, path);
}

const json& field(const json& j, const std::string& key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) fail(ErrorKind::SchemaError, path + ": missing field '" + key + "'");
    return *it;
}

json space_to_json(const FiniteSpace& x) {
    json j;
    j["format_version"] = 1;
    j["kind"] = "space";
    j["points"] = x.points();
    json leq = json::array();
    for (std::size_t p = 0; p < x.size(); ++p)
        for (std::size_t q = 0; q < x.size(); ++q)
            if (x.strictly_less(p, q)) leq.push_back(json::array({x.point_name(p), x.point_name(q)}));
    j["leq"] = std::move(leq);
    return j;
}

SpacePtr json_to_space(const json& j, const std::string& path) {
    if (j.is_string()) return corpus::space_by_name(j.get<std::string>());
    if (!j.is_object()) fail(ErrorKind::SchemaError, path + ": expected a space object or name");
    const json& pts = field(j, "points", path);
    if (!pts.is_array()) fail(ErrorKind::SchemaError, path + "/points: expected an array");
    std::vector<std::string> points;
    for (const json& p : pts) {
        if (!p.is_string()) fail(ErrorKind::SchemaError, path + "/points: names must be strings");
        points.push_back(p.get<std::string>());
    }
    const json& leq = field(j, "leq", path);
    if (!leq.is_array()) fail(ErrorKind::SchemaError, path + "/leq: expected an array of pairs");
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const json& e : leq) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            fail(ErrorKind::SchemaError, path + "/leq: each entry must be a pair of names");
        pairs.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return std::make_shared<const FiniteSpace>(std::move(points), pairs);
}

json sheaf_body_to_json(const Sheaf& f) {
    const FiniteSpace& x = f.space();
    json stalks;
    for (std::size_t p = 0; p < x.size(); ++p) {
        json s;
        s["gens"] = f.stalk(p).gens();
        s["rels"] = matrix_to_json(f.stalk(p).relations());
        stalks[x.point_name(p)] = std::move(s);
    }
    json rest;
    for (std::size_t p = 0; p < x.size(); ++p)
        for (std::size_t q = 0; q < x.size(); ++q)
            if (x.strictly_less(q, p))
                rest[x.point_name(p) + ":" + x.point_name(q)] =
                    matrix_to_json(f.restriction(p, q).matrix());
    json j;
    j["stalks"] = std::move(stalks);
    j["restrictions"] = std::move(rest);
    return j;
}

Sheaf json_to_sheaf_body(const json& j, const SpacePtr& space, const std::string& path) {
    const FiniteSpace& x = *space;
    const json& stalks = field(j, "stalks", path);
    if (!stalks.is_object()) fail(ErrorKind::SchemaError, path + "/stalks: expected an object");
    std::vector<FpGroup> groups(x.size());
    for (auto it = stalks.begin(); it != stalks.end(); ++it) {
        std::size_t p;
        try {
            p = x.point_index(it.key());
        } catch (const Error&) {
            fail(ErrorKind::SchemaError, path + "/stalks/" + it.key() + ": unknown point");
        }
        const json& gens = field(*it, "gens", path + "/stalks/" + it.key());
        if (!gens.is_number_unsigned() && !gens.is_number_integer())
            fail(ErrorKind::SchemaError, path + "/stalks/" + it.key() + "/gens: expected a count");
        std::size_t n = gens.get<std::size_t>();
        IntMatrix rels = json_to_relations(field(*it, "rels", path + "/stalks/" + it.key()), n,
                                           path + "/stalks/" + it.key() + "/rels");
        groups[p] = FpGroup(n, std::move(rels));
    }
    for (std::size_t p = 0; p < x.size(); ++p)
        if (stalks.find(x.point_name(p)) == stalks.end())
            fail(ErrorKind::SchemaError, path + "/stalks: missing point '" + x.point_name(p) + "'");

    const json& rest = field(j, "restrictions", path);
    if (!rest.is_object()) fail(ErrorKind::SchemaError, path + "/restrictions: expected an object");
    std::map<std::pair<std::size_t, std::size_t>, GroupHom> maps;
    for (auto it = rest.begin(); it != rest.end(); ++it) {
        const std::string key = it.key();
        const std::string kpath = path + "/restrictions/" + key;
        auto colon = key.find(':');
        if (colon == std::string::npos) fail(ErrorKind::SchemaError, kpath + ": key must be 'p:q'");
        std::size_t p, q;
        try {
            p = x.point_index(key.substr(0, colon));
            q = x.point_index(key.substr(colon + 1));
        } catch (const Error&) {
            fail(ErrorKind::SchemaError, kpath + ": unknown point");
        }
        if (!x.strictly_less(q, p))
            fail(ErrorKind::SchemaError, kpath + ": '" + key + "' is not a comparable pair");
        IntMatrix m = json_to_matrix(*it, groups[q].gens(), groups[p].gens(), kpath);
        maps.emplace(std::make_pair(p, q), GroupHom(groups[p], groups[q], std::move(m)));
    }
    return Sheaf(space, std::move(groups), maps);
}

json hom_table_to_json(const SheafHom& h) {
    const FiniteSpace& x = h.source().space();
    json t;
    for (std::size_t p = 0; p < x.size(); ++p)
        t[x.point_name(p)] = matrix_to_json(h.stalk_map(p).matrix());
    return t;
}

SheafHom json_to_hom_table(const json& j, const Sheaf& src, const Sheaf& dst,
                           const std::string& path) {
    const FiniteSpace& x = src.space();
    if (!j.is_object()) fail(ErrorKind::SchemaError, path + ": expected an object of matrices");
    std::vector<GroupHom> maps;
    for (std::size_t p = 0; p < x.size(); ++p) {
        const json& m = field(j, x.point_name(p), path);
        maps.push_back(GroupHom(src.stalk(p), dst.stalk(p),
                                json_to_matrix(m, dst.stalk(p).gens(), src.stalk(p).gens(),
                                               path + "/" + x.point_name(p))));
    }
    return SheafHom(src, dst, std::move(maps));
}

json group_to_json_presentation(const FpGroup& g) {
    json j;
    j["gens"] = g.gens();
    j["rels"] = matrix_to_json(g.relations());
    return j;
}

std::string cell_key(std::size_t p, std::size_t q) {
    return std::to_string(p) + "," + std::to_string(q);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

} // namespace

std::string serialize_space(const FiniteSpace& x) { return dump(space_to_json(x)); }

std::string serialize_sheaf(const Sheaf& f) {
    json j = sheaf_body_to_json(f);
    j["format_version"] = 1;
    j["kind"] = "sheaf";
    j["space"] = space_to_json(f.space());
    return dump(j);
}

std::string serialize_complex(const SheafComplex& l) {
    json j;
    j["format_version"] = 1;
    j["kind"] = "sheaf_complex";
    j["space"] = space_to_json(l.space());
    json terms, diffs;
    for (std::size_t k = 0; k < l.length(); ++k)
        terms[std::to_string(k)] = sheaf_body_to_json(l.terms()[k]);
    for (std::size_t k = 0; k < l.differentials().size(); ++k)
        diffs[std::to_string(k)] = hom_table_to_json(l.differentials()[k]);
    j["terms"] = std::move(terms);
    j["differentials"] = diffs.is_null() ? json::object() : std::move(diffs);
    return dump(j);
}

std::string serialize_double_complex(const DoubleComplex& k) {
    json j;
    j["format_version"] = 1;
    j["kind"] = "double_complex";
    j["pmax"] = k.pmax();
    j["qmax"] = k.qmax();
    json cells, horiz, vert;
    for (std::size_t p = 0; p <= k.pmax(); ++p)
        for (std::size_t q = 0; q <= k.qmax(); ++q)
            cells[cell_key(p, q)] = group_to_json_presentation(k.cell(p, q));
    for (std::size_t p = 0; p < k.pmax(); ++p)
        for (std::size_t q = 0; q <= k.qmax(); ++q)
            horiz[cell_key(p, q)] = matrix_to_json(k.horizontal(p, q).matrix());
    for (std::size_t p = 0; p <= k.pmax(); ++p)
        for (std::size_t q = 0; q < k.qmax(); ++q)
            vert[cell_key(p, q)] = matrix_to_json(k.vertical(p, q).matrix());
    j["cells"] = std::move(cells);
    j["horizontal"] = horiz.is_null() ? json::object() : std::move(horiz);
    j["vertical"] = vert.is_null() ? json::object() : std::move(vert);
    return dump(j);
}

std::string serialize(const WorkspaceFile& w) {
    switch (w.kind) {
        case FileKind::Space: return serialize_space(*w.space);
        case FileKind::Sheaf: return serialize_sheaf(*w.sheaf);
        case FileKind::Complex: return serialize_complex(*w.complex);
        case FileKind::Double: return serialize_double_complex(*w.dcomplex);
    }
    throw std::logic_error("unreachable file kind");
}

WorkspaceFile load_workspace_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(ErrorKind::ParseError, origin + ": " + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::SchemaError, origin + ": top level must be an object");
    const json& fv = field(j, "format_version", origin);
    if (!fv.is_number_integer() && !fv.is_number_unsigned())
        fail(ErrorKind::SchemaError, origin + "/format_version: expected an integer");
    if (fv.get<long long>() != 1)
        fail(ErrorKind::SchemaError, origin + "/format_version: unsupported version");
    const json& kind = field(j, "kind", origin);
    if (!kind.is_string()) fail(ErrorKind::SchemaError, origin + "/kind: expected a string");
    const std::string k = kind.get<std::string>();

    WorkspaceFile w;
    if (k == "space") {
        w.kind = FileKind::Space;
        w.space = json_to_space(j, origin);
        return w;
    }
    if (k == "sheaf") {
        w.kind = FileKind::Sheaf;
        w.space = json_to_space(field(j, "space", origin), origin + "/space");
        w.sheaf = json_to_sheaf_body(j, w.space, origin);
        return w;
    }
    if (k == "sheaf_complex") {
        w.kind = FileKind::Complex;
        w.space = json_to_space(field(j, "space", origin), origin + "/space");
        const json& terms = field(j, "terms", origin);
        if (!terms.is_object() || terms.empty())
            fail(ErrorKind::SchemaError, origin + "/terms: expected a nonempty object");
        std::vector<Sheaf> sheaves;
        for (std::size_t d = 0; d < terms.size(); ++d) {
            auto it = terms.find(std::to_string(d));
            if (it == terms.end())
                fail(ErrorKind::SchemaError, origin + "/terms: degrees must be contiguous from 0");
            sheaves.push_back(json_to_sheaf_body(*it, w.space, origin + "/terms/" + std::to_string(d)));
        }
        const json& diffs = field(j, "differentials", origin);
        if (!diffs.is_object() || diffs.size() + 1 != terms.size())
            fail(ErrorKind::SchemaError,
                 origin + "/differentials: expected one map per consecutive pair of terms");
        std::vector<SheafHom> homs;
        for (std::size_t d = 0; d + 1 < sheaves.size(); ++d) {
            auto it = diffs.find(std::to_string(d));
            if (it == diffs.end())
                fail(ErrorKind::SchemaError, origin + "/differentials: degrees must be contiguous from 0");
            homs.push_back(json_to_hom_table(*it, sheaves[d], sheaves[d + 1],
                                             origin + "/differentials/" + std::to_string(d)));
        }
        w.complex = SheafComplex(std::move(sheaves), std::move(homs));
        return w;
    }
    if (k == "double_complex") {
        w.kind = FileKind::Double;
        const json& pmj = field(j, "pmax", origin);
        const json& qmj = field(j, "qmax", origin);
        if (!pmj.is_number_unsigned() || !qmj.is_number_unsigned())
            fail(ErrorKind::SchemaError, origin + ": pmax/qmax must be nonnegative integers");
        const std::size_t pm = pmj.get<std::size_t>(), qm = qmj.get<std::size_t>();
        const json& cells = field(j, "cells", origin);
        std::vector<std::vector<FpGroup>> grid(pm + 1, std::vector<FpGroup>(qm + 1));
        for (std::size_t p = 0; p <= pm; ++p)
            for (std::size_t q = 0; q <= qm; ++q) {
                const std::string key = cell_key(p, q);
                auto it = cells.find(key);
                if (it == cells.end())
                    fail(ErrorKind::SchemaError, origin + "/cells: missing cell '" + key + "'");
                const json& gens = field(*it, "gens", origin + "/cells/" + key);
                std::size_t n = gens.get<std::size_t>();
                grid[p][q] = FpGroup(n, json_to_relations(field(*it, "rels", origin + "/cells/" + key),
                                                          n, origin + "/cells/" + key + "/rels"));
            }
        const json& horiz = field(j, "horizontal", origin);
        const json& vert = field(j, "vertical", origin);
        std::vector<std::vector<GroupHom>> hh, vv;
        for (std::size_t p = 0; p < pm; ++p) {
            std::vector<GroupHom> row;
            for (std::size_t q = 0; q <= qm; ++q) {
                const std::string key = cell_key(p, q);
                auto it = horiz.find(key);
                if (it == horiz.end())
                    fail(ErrorKind::SchemaError, origin + "/horizontal: missing map '" + key + "'");
                row.push_back(GroupHom(grid[p][q], grid[p + 1][q],
                                       json_to_matrix(*it, grid[p + 1][q].gens(), grid[p][q].gens(),
                                                      origin + "/horizontal/" + key)));
            }
            hh.push_back(std::move(row));
        }
        for (std::size_t p = 0; p <= pm; ++p) {
            std::vector<GroupHom> row;
            for (std::size_t q = 0; q < qm; ++q) {
                const std::string key = cell_key(p, q);
                auto it = vert.find(key);
                if (it == vert.end())
                    fail(ErrorKind::SchemaError, origin + "/vertical: missing map '" + key + "'");
                row.push_back(GroupHom(grid[p][q], grid[p][q + 1],
                                       json_to_matrix(*it, grid[p][q + 1].gens(), grid[p][q].gens(),
                                                      origin + "/vertical/" + key)));
            }
            vv.push_back(std::move(row));
        }
        w.dcomplex = DoubleComplex(std::move(grid), std::move(hh), std::move(vv));
        return w;
    }
    fail(ErrorKind::SchemaError, origin + "/kind: unknown kind '" + k + "'");
}

WorkspaceFile load_workspace(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::ParseError, path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_workspace_text(buf.str(), path);
}

std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", (unsigned long long)h);
    return out;
}

} // namespace finsheaf
