#include "upoblab/cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "upoblab/catalog.h"
#include "upoblab/errors.h"
#include "upoblab/json_io.h"
#include "upoblab/locc.h"
#include "upoblab/unextendibility.h"

namespace upoblab {

namespace {

std::size_t parse_count(const std::string& name, const std::string& text) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size()) {
        throw ConfigError("bad integer in catalog name " + name);
    }
    return static_cast<std::size_t>(v);
}

std::uint64_t parse_seed(const std::string& text) {
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(text, &pos, 0);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size()) throw ConfigError("bad seed " + text);
    return v;
}

void emit(const Json& report, const std::string& json_path, std::ostream& out) {
    out << report.dump(2) << '\n';
    if (!json_path.empty()) write_json_file(json_path, report);
}

struct ConstructArgs {
    std::string name;
    std::string base;
    std::string out;
};

struct VerifyArgs {
    std::string set;
    std::uint64_t budget = SearchOptions::kDefaultBudget;
    double tol = Tolerance::kDefaultEps;
    std::string seed = "0x5EED";
    unsigned jobs = 1;
    std::string json;
};

struct SimulateArgs {
    std::string protocol;
    double tol = Tolerance::kDefaultEps;
    std::string json;
};

struct ExportArgs {
    std::string set;
    std::string base;
    std::string format = "full";
    std::string out;
};

int cmd_construct(const ConstructArgs& a, std::ostream& out) {
    const OperatorSet s =
        construct_by_name(a.name, a.base.empty() ? std::nullopt : std::optional(a.base));
    const Json j = to_json(s);
    if (a.out.empty()) {
        out << j.dump(2) << '\n';
    } else {
        write_json_file(a.out, j);
        out << "wrote " << s.size() << " members to " << a.out << '\n';
    }
    return kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    const OperatorSet s = operator_set_from_json(read_json_file(a.set));
    ClassifyOptions opts;
    opts.search.tol = Tolerance(a.tol);
    opts.search.budget = a.budget;
    opts.search.jobs = std::max(1u, a.jobs);
    opts.unitary.tol = Tolerance(a.tol);
    opts.unitary.seed = parse_seed(a.seed);
    const Classification c = classify(s, opts);

    ReportEnvelope r;
    r.command = "verify";
    r.inputs = Json{{"set", a.set},
                    {"members", s.size()},
                    {"budget", a.budget},
                    {"seed", opts.unitary.seed},
                    {"jobs", opts.search.jobs}};
    r.tolerance = opts.search.tol;
    r.result = to_json(c);
    emit(to_json(r), a.json, out);

    if (!c.verdict_labels.empty()) return kExitOk;
    if (c.upob.status == ExtendibilityStatus::Unknown) return kExitInconclusive;
    return kExitNegative;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    const Tolerance tol(a.tol);
    ReportEnvelope r;
    r.command = "simulate";
    r.inputs = Json{{"protocol", a.protocol}};
    r.tolerance = tol;
    bool ok = false;
    if (a.protocol == "three-ebit") {
        const ProtocolTrace t = run_three_ebit_protocol(tol);
        r.result = to_json(t);
        ok = t.all_passed();
    } else if (a.protocol == "nonlocality-evidence") {
        const NonlocalityEvidence e = genuine_nonlocality_evidence(tol);
        r.result = to_json(e);
        ok = e.all_passed();
    } else {
        err << "unknown protocol: " << a.protocol << " (expected three-ebit or nonlocality-evidence)\n";
        return kExitUsage;
    }
    emit(to_json(r), a.json, out);
    return ok ? kExitOk : kExitNegative;
}

int cmd_export(const ExportArgs& a, std::ostream& out) {
    const OperatorSet s = std::filesystem::exists(a.set)
                              ? operator_set_from_json(read_json_file(a.set))
                              : construct_by_name(a.set, a.base.empty() ? std::nullopt
                                                                        : std::optional(a.base));
    Json members = Json::array();
    if (a.format == "full") {
        for (const auto& m : s.members()) {
            members.push_back(Json{{"label", m.label()}, {"matrix", to_json(m.full())}});
        }
    } else if (a.format == "vectors") {
        for (const auto& pv : vectorize_set(s)) {
            Json factors = Json::array();
            for (const auto& f : pv.factors) {
                Json v = Json::array();
                for (const auto& z : f) v.push_back(to_json(z));
                factors.push_back(std::move(v));
            }
            members.push_back(Json{{"label", pv.label}, {"factors", std::move(factors)}});
        }
    } else {
        throw ConfigError("unknown export format " + a.format + " (expected full or vectors)");
    }
    Json shape = to_json(s)["shape"];
    const Json j{{"format", a.format}, {"shape", shape}, {"members", std::move(members)}};
    if (a.out.empty()) {
        out << j.dump(2) << '\n';
    } else {
        write_json_file(a.out, j);
    }
    return kExitOk;
}

}  // namespace

OperatorSet construct_by_name(const std::string& name, const std::optional<std::string>& base) {
    const auto colon = name.find(':');
    const std::string head = name.substr(0, colon);
    const bool has_arg = colon != std::string::npos;
    const std::string arg = has_arg ? name.substr(colon + 1) : "";
    auto no_arg = [&]() {
        if (has_arg) throw ConfigError("catalog name " + head + " takes no parameter");
    };
    if (head == "u2") {
        no_arg();
        return u2_strong_upuob();
    }
    if (head == "qutrit-uuo") {
        no_arg();
        return qutrit_uuo_set();
    }
    if (head == "example2") {
        no_arg();
        return example_upuob_2x3();
    }
    if (head == "example1-upb") {
        no_arg();
        const auto upb = example1_upb();
        return as_column_set(upb);
    }
    if (head == "example1-upob") {
        no_arg();
        return example1_upob();
    }
    if (head == "nqubit" && has_arg) return nqubit_strong_upuob(parse_count(name, arg));
    if (head == "weyl" && has_arg) return weyl_heisenberg(parse_count(name, arg));
    if (head == "lift" && has_arg) {
        const std::string b = base.value_or("qutrit-uuo");
        if (b.rfind("lift", 0) == 0) throw ConfigError("lift base cannot itself be a lift");
        return lift_uuo({parse_count(name, arg), construct_by_name(b)});
    }
    throw ConfigError("unknown catalog name: " + name +
                      " (expected u2, nqubit:N, qutrit-uuo, weyl:D, lift:Q, example2, "
                      "example1-upb, example1-upob)");
}

void configure_logging_from_env() {
    const char* v = std::getenv("UPOBLAB_LOG");
    spdlog::set_level(spdlog::level::warn);
    if (v == nullptr) return;
    const std::string level(v);
    if (level == "error") {
        spdlog::set_level(spdlog::level::err);
    } else if (level == "info") {
        spdlog::set_level(spdlog::level::info);
    } else if (level == "debug") {
        spdlog::set_level(spdlog::level::debug);
    } else {
        spdlog::warn("ignoring UPOBLAB_LOG={} (expected error, info or debug)", level);
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Product operator bases: construction, certification and LOCC replay"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    ConstructArgs ca;
    auto* construct = app.add_subcommand("construct", "Write a catalog set as JSON");
    construct->add_option("--name", ca.name, "Catalog identifier")->required();
    construct->add_option("--base", ca.base, "Base set for lift:Q (default qutrit-uuo)");
    construct->add_option("--out", ca.out, "Output file (stdout when omitted)");

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Classify a set read from JSON");
    verify->add_option("--set", va.set, "OperatorSet JSON file")->required();
    verify->add_option("--budget", va.budget, "Search node budget")->check(CLI::PositiveNumber);
    verify->add_option("--tol", va.tol, "Tolerance eps")->check(CLI::Range(0.0, 1.0));
    verify->add_option("--seed", va.seed, "Seed for the unitary witness search");
    verify->add_option("--jobs", va.jobs, "Parallel search workers")->check(CLI::PositiveNumber);
    verify->add_option("--json", va.json, "Also write the report to this file");

    SimulateArgs sa;
    auto* simulate = app.add_subcommand("simulate", "Replay a protocol");
    simulate->add_option("--protocol", sa.protocol, "three-ebit or nonlocality-evidence")->required();
    simulate->add_option("--tol", sa.tol, "Tolerance eps")->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--json", sa.json, "Also write the report to this file");

    ExportArgs ea;
    auto* exp = app.add_subcommand("export", "Export full matrices or vectorized factors");
    exp->add_option("--set", ea.set, "Catalog identifier or OperatorSet JSON file")->required();
    exp->add_option("--base", ea.base, "Base set for lift:Q");
    exp->add_option("--format", ea.format, "full or vectors");
    exp->add_option("--out", ea.out, "Output file (stdout when omitted)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (construct->parsed()) return cmd_construct(ca, out);
        if (verify->parsed()) return cmd_verify(va, out);
        if (simulate->parsed()) return cmd_simulate(sa, out, err);
        if (exp->parsed()) return cmd_export(ea, out);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace upoblab
