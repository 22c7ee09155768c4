#pragma once

#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fuzzy/asdim.hpp"
#include "fuzzy/coarse.hpp"
#include "fuzzy/io.hpp"
#include "fuzzy/oracle.hpp"

namespace fuzzy::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

/// Everything a subcommand reads. Values from a --config file replace the
/// corresponding flags.
struct RunConfig {
    std::string command;
    std::string space = "standard";
    io::Json space_json;
    std::string tnorm;
    std::string window;
    std::vector<std::string> scales;
    std::string bound;
    std::uint64_t seed = 0;
    std::string out;
    std::string config;
    std::string witness_file;
    std::string map_file;
};

namespace detail {

inline void apply_config(RunConfig& c) {
    if (c.config.empty())
        return;
    io::Json j = io::read_json_file(c.config);
    if (!j.is_object())
        throw ParseError("config '" + c.config + "' must be a JSON object");
    if (j.contains("space"))
        c.space_json = j.at("space");
    auto str = [&](const char* key, std::string& dst) {
        if (!j.contains(key))
            return;
        if (!j.at(key).is_string())
            throw ParseError(std::string("config field '") + key + "' must be a string");
        dst = j.at(key).get<std::string>();
    };
    str("tnorm", c.tnorm);
    str("window", c.window);
    str("bound", c.bound);
    str("out", c.out);
    str("witness", c.witness_file);
    str("map", c.map_file);
    if (j.contains("seed"))
        c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("scales")) {
        c.scales.clear();
        for (const auto& s : j.at("scales"))
            c.scales.push_back(s.get<std::string>());
    }
}

inline FuzzyMetricSpace space_of(const RunConfig& c) {
    FuzzyMetricSpace s = c.space_json.is_null() ? io::space_from_tag(c.space) : io::space_from(c.space_json);
    if (c.tnorm.empty())
        return s;
    io::Json j = io::space_to_json(s);
    j["tnorm"] = c.tnorm;
    return io::space_from(j);
}

inline PointSet window_of(const RunConfig& c, const std::string& fallback) {
    return parse_range(c.window.empty() ? fallback : c.window);
}

inline std::vector<ScaleParams> scales_of(const RunConfig& c, const std::vector<std::string>& fallback) {
    std::vector<ScaleParams> out;
    for (const auto& s : c.scales.empty() ? fallback : c.scales)
        out.push_back(ScaleParams::parse(s));
    return out;
}

/// Writes records to stdout and, when --out names a report, to that file.
class Emitter {
public:
    Emitter(std::ostream& out, const std::string& path) : out_(out) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw ParseError("cannot write '" + path + "'");
        }
    }

    void emit(const CertReport& rep) {
        io::write_report(out_, rep);
        if (file_.is_open())
            io::write_report(file_, rep);
        ok_ = ok_ && rep.passed();
    }

    void fail(const std::string& subject, const std::string& predicate, const std::string& note) {
        CertReport rep(subject);
        rep.add(predicate, Verdict::fail, note);
        emit(rep);
    }

    [[nodiscard]] bool ok() const { return ok_; }

private:
    std::ostream& out_;
    std::ofstream file_;
    bool ok_ = true;
};

inline int finish(Emitter& em, const std::string& command) {
    CertReport s(command);
    s.add(pass_fail("summary", em.ok()));
    em.emit(s);
    return em.ok() ? kPass : kFail;
}

inline const std::vector<std::string> kDefaultTimes = {"1/2", "1", "2", "7"};

inline int cmd_verify_axioms(const RunConfig& c, std::ostream& out) {
    auto space = space_of(c);
    auto window = window_of(c, "1..50");
    std::vector<Rational> times;
    if (c.scales.empty())
        for (const auto& t : kDefaultTimes)
            times.push_back(Rational::parse(t));
    else
        for (const auto& p : scales_of(c, {}))
            times.push_back(p.t());
    Emitter em(out, c.out);
    auto rep = check_axioms(space, window, times);
    Record pp = info_record("tnorm_positivity_preserving");
    pp.note = is_positivity_preserving(space.tnorm()) ? "yes" : "no: finite unions of bounded sets may be unbounded";
    rep.add(std::move(pp));
    em.emit(rep);
    return finish(em, "verify-axioms");
}

inline int cmd_witness(const RunConfig& c, std::ostream& out) {
    auto space = space_of(c);
    auto window = window_of(c, "1..100");
    Emitter em(out, {});
    io::Json all = io::Json::array();
    for (const auto& p : scales_of(c, {"1/2:1"})) {
        try {
            auto w = construct_witness(space, p, window);
            em.emit(verify_witness(space, w));
            all.push_back(io::to_json(w));
        } catch (const Error& e) {
            if (dynamic_cast<const ParseError*>(&e))
                throw;
            em.fail("witness at " + p.str(), "construction", e.what());
        }
    }
    if (!c.out.empty())
        io::write_json_file(c.out, all.size() == 1 ? all[0] : all);
    return finish(em, "witness");
}

inline std::vector<DimensionWitness> read_witnesses(const std::string& path) {
    if (path.empty())
        throw ParseError("check needs --witness FILE");
    io::Json j = io::read_json_file(path);
    std::vector<DimensionWitness> out;
    if (j.is_array())
        for (const auto& w : j)
            out.push_back(io::witness_from(w));
    else
        out.push_back(io::witness_from(j));
    return out;
}

inline int cmd_check(const RunConfig& c, std::ostream& out) {
    auto space = space_of(c);
    auto witnesses = read_witnesses(c.witness_file);
    auto grid = scales_of(c, {});
    Emitter em(out, c.out);
    for (const auto& w : witnesses) {
        if (grid.empty()) {
            em.emit(verify_witness(space, w));
            continue;
        }
        for (const auto& p : grid) {
            DimensionWitness at = w;
            at.params = p;
            em.emit(verify_witness(space, at));
        }
    }
    return finish(em, "check");
}

inline int cmd_pipeline(const RunConfig& c, std::ostream& out) {
    auto space = space_of(c);
    auto window = window_of(c, "1..200");
    Emitter em(out, c.out);
    for (const auto& p : scales_of(c, {"1/2:1"})) {
        try {
            em.emit(run_pipeline(space, p, window).report);
        } catch (const Error& e) {
            if (dynamic_cast<const ParseError*>(&e))
                throw;
            em.fail("pipeline at " + p.str(), "pipeline", e.what());
        }
    }
    return finish(em, "pipeline");
}

/// Map file: source, target, source_window, target_window, map, expansive,
/// proper, onto, and optionally inverse ("r:t") and push (list of "r:t").
inline int cmd_coarse(const RunConfig& c, std::ostream& out) {
    if (c.map_file.empty())
        throw ParseError("coarse needs --map FILE");
    io::Json j = io::read_json_file(c.map_file);
    auto x = io::space_from(j.value("source", io::Json("standard")));
    auto y = io::space_from(j.value("target", io::Json("standard")));
    auto wx = io::point_set_from(j.at("source_window"));
    auto wy = io::point_set_from(j.value("target_window", j.at("source_window")));
    CoarseMap f = io::coarse_map_from(j);
    std::vector<ScaleParams> push = scales_of(c, {});
    if (push.empty() && j.contains("push"))
        for (const auto& p : j.at("push"))
            push.push_back(io::params_from(p));

    Emitter em(out, c.out);
    auto guarded = [&](const std::string& subject, const std::function<void()>& step) {
        try {
            step();
        } catch (const Error& e) {
            if (dynamic_cast<const ParseError*>(&e))
                throw;
            em.fail(subject, "derivation", e.what());
        }
    };
    if (!f.expansive.empty())
        em.emit(check_expansive(x, y, f, wx));
    if (!f.proper.empty())
        em.emit(check_proper(x, y, f, wx));
    if (f.onto)
        em.emit(check_coarsely_onto(y, f, *f.onto, wy, wx));
    if (j.contains("inverse")) {
        auto p = io::params_from(j.at("inverse"));
        guarded("coarse inverse at " + p.str(),
                [&] { em.emit(construct_coarse_inverse(x, y, f, p, wy, wx).report); });
    }
    for (const auto& p : push)
        guarded("push to " + p.str(), [&] {
            auto res = push_witness(x, y, f, p, wx, wy);
            em.emit(res.report);
            em.emit(verify_witness(y, res.witness));
        });
    return finish(em, "coarse");
}

inline int cmd_oracle(const RunConfig& c, std::ostream& out) {
    auto space = space_of(c);
    auto window = window_of(c, "1..8");
    if (window.size() > kOracleMaxPoints)
        throw PreconditionError("oracle window has " + std::to_string(window.size()) + " points; at most " +
                                std::to_string(kOracleMaxPoints) + " allowed");
    std::optional<ScaleParams> bound_flag;
    if (!c.bound.empty())
        bound_flag = ScaleParams::parse(c.bound);
    Emitter em(out, c.out);
    for (const auto& p : scales_of(c, {"1/2:1"})) {
        CertReport rep("oracle at " + p.str() + " on " + space.describe());
        std::optional<DimensionWitness> w;
        try {
            w = construct_witness(space, p, window);
        } catch (const Error& e) {
            if (!bound_flag)
                throw;
            Record r = info_record("constructor");
            r.note = e.what();
            rep.add(std::move(r));
        }
        ScaleParams bound = bound_flag ? *bound_flag : w->bound_params;
        int best = oracle_min_families(space, p, bound, window);
        Record o = info_record("oracle");
        o.params = p;
        o.window = describe(window);
        o.value("families", Rational(best));
        o.note = "bound " + bound.str();
        rep.add(std::move(o));
        if (w) {
            bool verified = verify_witness(space, *w).passed();
            auto count = static_cast<std::int64_t>(w->families.size());
            Record k = pass_fail("consistent", verified && best <= count);
            k.value("oracle", Rational(best)).value("constructor", Rational(count));
            if (!verified)
                k.note = "constructor witness does not verify";
            rep.add(std::move(k));
        }
        auto g = scale_graph(space, p, window);
        bool all_bounded = std::all_of(g.components.begin(), g.components.end(),
                                       [&](const PointSet& comp) { return is_bounded(space, comp, bound); });
        Record sg = pass_fail("scale_graph", (best == 1) == all_bounded);
        sg.value("components", Rational(static_cast<std::int64_t>(g.components.size())));
        sg.note = all_bounded ? "every component bounded" : "some component unbounded";
        rep.add(std::move(sg));
        em.emit(rep);
    }
    return finish(em, "oracle");
}

} // namespace detail

/// Parses argv and runs one subcommand. Exit codes: 0 pass, 1 certified
/// failure, 2 usage, parse or size error.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Certify coarse-geometric properties of fuzzy metric spaces at explicit scales"};
    app.require_subcommand(1);
    RunConfig c;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--space", c.space, "space kind, e.g. standard:scaled:4 or ratio_minmax");
        sub->add_option("--tnorm", c.tnorm, "product | min | lukasiewicz");
        sub->add_option("--window", c.window, "inclusive range a..b");
        sub->add_option("--scale", c.scales, "scale r:t with rationals p/q (repeatable)");
        sub->add_option("--seed", c.seed, "seed for randomized steps");
        sub->add_option("--out", c.out, "output file");
        sub->add_option("--config", c.config, "JSON config; its fields replace flags");
    };
    struct Sub {
        const char* name;
        const char* help;
        int (*run)(const RunConfig&, std::ostream&);
    };
    const Sub subs[] = {
        {"verify-axioms", "check the fuzzy metric axioms on a window", detail::cmd_verify_axioms},
        {"witness", "construct and verify dimension witnesses", detail::cmd_witness},
        {"check", "verify witness files at a scale grid", detail::cmd_check},
        {"pipeline", "multiplicity, Lebesgue and refinement chain", detail::cmd_pipeline},
        {"coarse", "coarse map checks and witness transport", detail::cmd_coarse},
        {"oracle", "brute-force minimum family count on small windows", detail::cmd_oracle},
    };
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        common(sub);
        if (std::string(s.name) == "check")
            sub->add_option("--witness", c.witness_file, "witness JSON file");
        if (std::string(s.name) == "coarse")
            sub->add_option("--map", c.map_file, "map JSON file");
        if (std::string(s.name) == "oracle")
            sub->add_option("--bound", c.bound, "bound scale r:t (default: the constructor's)");
        sub->callback([&c, name = std::string(s.name)] { c.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }
    try {
        detail::apply_config(c);
        for (const auto& s : subs)
            if (c.command == s.name)
                return s.run(c, out);
        return kUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "failed: " << e.what() << '\n';
        return kFail;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

} // namespace fuzzy::cli
