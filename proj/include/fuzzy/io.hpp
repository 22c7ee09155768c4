#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzy/asdim.hpp"
#include "fuzzy/coarse.hpp"
#include "fuzzy/error.hpp"
#include "fuzzy/points.hpp"
#include "fuzzy/report.hpp"
#include "fuzzy/scale.hpp"
#include "fuzzy/space.hpp"

namespace fuzzy::io {

using Json = nlohmann::ordered_json;

// Rationals travel as "p/q" strings ("p" for integers); plain JSON integers
// are accepted on input, floating-point numbers are not.
inline Rational rational_from(const Json& j) {
    if (j.is_string())
        return Rational::parse(j.get<std::string>());
    if (j.is_number_integer())
        return Rational(j.get<std::int64_t>());
    throw ParseError("expected a rational \"p/q\", got " + j.dump());
}

inline Json to_json(const Rational& r) { return r.str(); }

inline ScaleParams params_from(const Json& j) {
    if (!j.is_string())
        throw ParseError("expected scale \"r:t\", got " + j.dump());
    return ScaleParams::parse(j.get<std::string>());
}

/// "{1..4,7}", "a..b", a single integer, or a JSON array of integers.
inline PointSet parse_point_set(const std::string& text) {
    std::string s = text;
    if (!s.empty() && s.front() == '{') {
        if (s.back() != '}')
            throw ParseError("unterminated point set '" + text + "'");
        s = s.substr(1, s.size() - 2);
    }
    std::vector<Point> pts;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        if (part.empty())
            throw ParseError("empty entry in point set '" + text + "'");
        if (part.find("..") != std::string::npos) {
            auto r = parse_range(part);
            pts.insert(pts.end(), r.begin(), r.end());
            continue;
        }
        try {
            std::size_t used = 0;
            Point p = std::stoll(part, &used);
            if (used != part.size())
                throw ParseError("bad point '" + part + "' in '" + text + "'");
            pts.push_back(p);
        } catch (const std::logic_error&) {
            throw ParseError("bad point '" + part + "' in '" + text + "'");
        }
    }
    return make_point_set(std::move(pts));
}

inline PointSet point_set_from(const Json& j) {
    if (j.is_string())
        return parse_point_set(j.get<std::string>());
    if (j.is_number_integer())
        return {j.get<Point>()};
    if (j.is_array()) {
        std::vector<Point> pts;
        for (const auto& e : j) {
            if (!e.is_number_integer())
                throw ParseError("point set entries must be integers, got " + e.dump());
            pts.push_back(e.get<Point>());
        }
        return make_point_set(std::move(pts));
    }
    throw ParseError("expected a point set, got " + j.dump());
}

inline Json to_json(const PointSet& s) { return describe(s); }

inline TNorm default_tnorm(SpaceKind k) {
    switch (k) {
    case SpaceKind::pathological:
        return TNormKind::lukasiewicz;
    case SpaceKind::ultrametric_standard:
        return TNormKind::minimum;
    default:
        return TNormKind::product;
    }
}

inline MetricDescriptor metric_from_tag(const std::string& tag) {
    auto fields = [&] {
        std::vector<std::string> out;
        std::stringstream in(tag);
        std::string part;
        while (std::getline(in, part, ':'))
            out.push_back(part);
        return out;
    }();
    auto integer = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            Point v = std::stoll(s, &used);
            if (used == s.size())
                return v;
        } catch (const std::logic_error&) {
        }
        throw ParseError("bad integer '" + s + "' in metric '" + tag + "'");
    };
    if (fields.empty() || fields[0] == "integers")
        return MetricDescriptor::integers();
    if (fields[0] == "scaled" && fields.size() == 2)
        return MetricDescriptor::scaled(integer(fields[1]));
    if (fields[0] == "lattice" && fields.size() == 3)
        return MetricDescriptor::lattice(static_cast<int>(integer(fields[1])), integer(fields[2]));
    if (fields[0] == "max_ultrametric")
        return MetricDescriptor::max_ultrametric();
    throw ParseError("unknown metric '" + tag + "' (integers|scaled:q|lattice:dim:side|max_ultrametric)");
}

inline Json metric_to_json(const MetricDescriptor& m) {
    if (m.rule() != MetricDescriptor::Rule::table)
        return m.tag();
    Json rows = Json::array();
    for (const auto& row : *m.table_rows()) {
        Json r = Json::array();
        for (const auto& v : row)
            r.push_back(v.str());
        rows.push_back(std::move(r));
    }
    return Json{{"table", rows}};
}

inline MetricDescriptor metric_from(const Json& j) {
    if (j.is_string())
        return metric_from_tag(j.get<std::string>());
    if (j.is_object() && j.contains("table")) {
        std::vector<std::vector<Rational>> rows;
        for (const auto& row : j.at("table")) {
            rows.emplace_back();
            for (const auto& v : row)
                rows.back().push_back(rational_from(v));
        }
        return MetricDescriptor::table(std::move(rows));
    }
    throw ParseError("bad metric " + j.dump());
}

/// Kind names: standard[:metric], pathological, reciprocal_product,
/// ratio_minmax, ultrametric.
inline SpaceKind kind_from_tag(const std::string& tag) {
    for (SpaceKind k : {SpaceKind::standard, SpaceKind::pathological, SpaceKind::reciprocal_product,
                        SpaceKind::ratio_minmax, SpaceKind::ultrametric_standard})
        if (tag == to_string(k))
            return k;
    if (tag == "ultrametric_standard")
        return SpaceKind::ultrametric_standard;
    throw ParseError("unknown space kind '" + tag +
                     "' (standard|pathological|reciprocal_product|ratio_minmax|ultrametric)");
}

inline FuzzyMetricSpace make_space(SpaceKind kind, std::optional<TNorm> tnorm, const MetricDescriptor& metric) {
    TNorm star = tnorm.value_or(default_tnorm(kind));
    switch (kind) {
    case SpaceKind::standard:
        return FuzzyMetricSpace::standard(metric, star);
    case SpaceKind::pathological:
        return FuzzyMetricSpace::pathological(star);
    case SpaceKind::reciprocal_product:
        return FuzzyMetricSpace::reciprocal_product(star);
    case SpaceKind::ratio_minmax:
        return FuzzyMetricSpace::ratio_minmax(star);
    case SpaceKind::ultrametric_standard:
        return FuzzyMetricSpace::ultrametric_standard(star);
    }
    throw ParseError("unknown space kind");
}

/// "kind" or "standard:<metric tag>".
inline FuzzyMetricSpace space_from_tag(const std::string& tag, std::optional<TNorm> tnorm = std::nullopt) {
    auto colon = tag.find(':');
    std::string kind = tag.substr(0, colon);
    MetricDescriptor metric = MetricDescriptor::integers();
    if (colon != std::string::npos) {
        if (kind != "standard")
            throw ParseError("only standard spaces take a metric: '" + tag + "'");
        metric = metric_from_tag(tag.substr(colon + 1));
    }
    return make_space(kind_from_tag(kind), tnorm, metric);
}

inline FuzzyMetricSpace space_from(const Json& j) {
    if (j.is_string())
        return space_from_tag(j.get<std::string>());
    if (!j.is_object() || !j.contains("kind"))
        throw ParseError("space needs a \"kind\": " + j.dump());
    std::optional<TNorm> star;
    if (j.contains("tnorm"))
        star = TNorm::from_tag(j.at("tnorm").get<std::string>());
    MetricDescriptor metric = j.contains("metric") ? metric_from(j.at("metric")) : MetricDescriptor::integers();
    return make_space(kind_from_tag(j.at("kind").get<std::string>()), star, metric);
}

inline Json space_to_json(const FuzzyMetricSpace& s) {
    Json j{{"kind", to_string(s.kind())}, {"tnorm", s.tnorm().tag()}};
    if (s.kind() == SpaceKind::standard)
        j["metric"] = metric_to_json(*s.metric());
    return j;
}

inline Json to_json(const Family& f) {
    Json sets = Json::array();
    for (const auto& s : f.sets)
        sets.push_back(to_json(s));
    return Json{{"label", f.label}, {"sets", sets}};
}

inline Family family_from(const Json& j) {
    std::vector<PointSet> sets;
    for (const auto& s : j.at("sets"))
        sets.push_back(point_set_from(s));
    return Family::make(j.value("label", std::string()), std::move(sets));
}

inline Json to_json(const DimensionWitness& w) {
    Json fams = Json::array();
    for (const auto& f : w.families)
        fams.push_back(to_json(f));
    return Json{{"n", w.n},
                {"params", w.params.str()},
                {"bound", w.bound_params.str()},
                {"window", to_json(w.window)},
                {"note", w.note},
                {"families", fams}};
}

inline DimensionWitness witness_from(const Json& j) {
    try {
        std::vector<Family> fams;
        for (const auto& f : j.at("families"))
            fams.push_back(family_from(f));
        return DimensionWitness{j.at("n").get<int>(),          params_from(j.at("params")), std::move(fams),
                                params_from(j.at("bound")),     point_set_from(j.at("window")),
                                j.value("note", std::string())};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad witness: ") + e.what());
    }
}

inline Mapping mapping_from(const Json& j) {
    if (j.is_object() && j.contains("table")) {
        std::map<Point, Point> t;
        for (const auto& e : j.at("table")) {
            if (!e.is_array() || e.size() != 2)
                throw ParseError("table entries are [x, f(x)] pairs: " + e.dump());
            t[e[0].get<Point>()] = e[1].get<Point>();
        }
        return Mapping::table(std::move(t));
    }
    if (!j.is_string())
        throw ParseError("bad map " + j.dump());
    std::string s = j.get<std::string>();
    auto integer = [&](const std::string& v) {
        try {
            std::size_t used = 0;
            Point x = std::stoll(v, &used);
            if (used == v.size())
                return x;
        } catch (const std::logic_error&) {
        }
        throw ParseError("bad integer '" + v + "' in map '" + s + "'");
    };
    if (s == "identity")
        return Mapping::identity();
    if (s.rfind("inclusion:", 0) == 0)
        return Mapping::inclusion(integer(s.substr(10)));
    if (s.rfind("affine:", 0) == 0) {
        auto body = s.substr(7);
        auto comma = body.find(',');
        if (comma == std::string::npos)
            throw ParseError("affine map needs 'affine:a,b': '" + s + "'");
        return Mapping::affine(integer(body.substr(0, comma)), integer(body.substr(comma + 1)));
    }
    throw ParseError("unknown map '" + s + "' (identity|affine:a,b|inclusion:q|{table})");
}

inline Json mapping_to_json(const Mapping& m) {
    switch (m.kind()) {
    case Mapping::Kind::identity:
        return "identity";
    case Mapping::Kind::affine:
        if (m.tag().rfind("inclusion", 0) == 0)
            return "inclusion:" + std::to_string(m.a());
        return "affine:" + std::to_string(m.a()) + "," + std::to_string(m.b());
    case Mapping::Kind::table: {
        Json t = Json::array();
        for (const auto& [x, y] : m.entries())
            t.push_back(Json::array({x, y}));
        return Json{{"table", t}};
    }
    }
    return "identity";
}

/// Rows as ["A","t","B","t'"], or {"isometric": {"levels": [...], "times": [...]}}.
inline std::vector<ModulusEntry> modulus_from(const Json& j) {
    if (j.is_object() && j.contains("isometric")) {
        std::vector<Rational> levels, times;
        for (const auto& v : j.at("isometric").at("levels"))
            levels.push_back(rational_from(v));
        for (const auto& v : j.at("isometric").at("times"))
            times.push_back(rational_from(v));
        return isometric_modulus(levels, times);
    }
    std::vector<ModulusEntry> rows;
    for (const auto& r : j) {
        if (!r.is_array() || r.size() != 4)
            throw ParseError("modulus rows are [A, t, B, t'], got " + r.dump());
        rows.push_back({rational_from(r[0]), rational_from(r[1]), rational_from(r[2]), rational_from(r[3])});
    }
    return rows;
}

inline Json modulus_to_json(const std::vector<ModulusEntry>& rows) {
    Json out = Json::array();
    for (const auto& e : rows)
        out.push_back(Json::array({e.a.str(), e.t.str(), e.b.str(), e.t_out.str()}));
    return out;
}

inline CoarseMap coarse_map_from(const Json& j) {
    CoarseMap f;
    f.mapping = mapping_from(j.at("map"));
    if (j.contains("expansive"))
        f.expansive = modulus_from(j.at("expansive"));
    if (j.contains("proper"))
        f.proper = modulus_from(j.at("proper"));
    if (j.contains("onto"))
        f.onto = params_from(j.at("onto"));
    return f;
}

inline Json to_json(const CoarseMap& f) {
    Json j{{"map", mapping_to_json(f.mapping)},
           {"expansive", modulus_to_json(f.expansive)},
           {"proper", modulus_to_json(f.proper)}};
    if (f.onto)
        j["onto"] = f.onto->str();
    return j;
}

inline Json to_json(const Record& r, const std::string& subject) {
    Json j{{"subject", subject}, {"predicate", r.predicate}, {"verdict", to_string(r.verdict)}};
    if (r.params)
        j["params"] = r.params->str();
    if (!r.window.empty())
        j["window"] = r.window;
    if (!r.witness.empty())
        j["witness"] = r.witness;
    if (!r.values.empty()) {
        Json v = Json::object();
        for (const auto& [k, x] : r.values)
            v[k] = x.str();
        j["values"] = v;
    }
    if (!r.note.empty())
        j["note"] = r.note;
    return j;
}

/// One JSON object per record, one record per line.
inline void write_report(std::ostream& out, const CertReport& rep) {
    for (const auto& r : rep.records())
        out << to_json(r, rep.subject()).dump() << '\n';
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

} // namespace fuzzy::io
