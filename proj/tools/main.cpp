// qfw: batch entry point. Every command prints one JSON document.
// Exit codes: 0 pass, 1 a check failed, 2 usage or config error.

#include "qfw/io.hpp"
#include "qfw/suites.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace qfw;
using io::json;

namespace {

struct Outcome {
    json out;
    bool pass = true;
};

bool usage_error(const std::string& code) {
    return code == "ParseError" || code == "ConfigError" || code == "UnsupportedFormat" || code == "UnsupportedRing" || code == "BadParams";
}

json stamped(json j, const std::string& kind) {
    j["schema"] = io::schema;
    j["kind"] = kind;
    return j;
}

// A string that is not a readable file is parsed as inline JSON or a short form.
json load(const std::string& arg) {
    try {
        return io::read_file(arg);
    } catch (const Error&) {
    }
    try {
        return io::parse(arg);
    } catch (const Error&) {
    }
    return json(arg);
}

FiniteRing load_ring(const std::string& arg) {
    auto j = load(arg);
    if (j.is_object() && j.contains("group")) return verify_crossed(io::crossed_from_json(j)).ring();
    if (j.is_object() && j.contains("ring") && !j.contains("kind")) j = j.at("ring");
    return io::ring_from_json(j);
}

ScanMode scan_mode(const std::string& s) {
    if (s == "exhaustive") return ScanMode::exhaustive;
    if (s == "sample") return ScanMode::sample;
    return ScanMode::automatic;
}

json hom_json(const HomInfo& f, const FiniteLattice& L) {
    return {{"kernel", L.label(f.kernel)}, {"algebraic", f.algebraic}, {"injective", f.injective}, {"surjective", f.surjective}};
}

Outcome check_qframe(const std::string& in, const std::string& hom) {
    const auto any = io::lattice_from_json(load(in));
    Outcome o;
    if (const auto* C = std::get_if<ChainLattice>(&any)) {
        const auto p = lattice_props(*C);
        const auto len = length(*C);
        o.out = {{"qframe", p.modular}, {"modular", p.modular}, {"distributive", p.distributive}, {"length", len ? json(*len) : json()}};
        o.pass = p.modular;
        return o;
    }
    const auto L = share(std::get<FiniteLattice>(any));
    const auto p = lattice_props(*L);
    o.out = {{"qframe", p.modular}, {"modular", p.modular}, {"distributive", p.distributive}, {"size", L->size()}, {"length", L->length()}};
    if (p.modular_witness) o.out["witness"] = *p.modular_witness;
    o.pass = p.modular;
    if (!hom.empty()) {
        const auto h = load(hom);
        const auto T = h.contains("target") ? share(io::finite_lattice_from_json(h.at("target"))) : L;
        const auto f = io::hom_from_json(h, L, T);
        o.out["hom"] = hom_json(kernel_and_algebraicity(f), *L);
    }
    return o;
}

Outcome length_cmd(const std::string& in) {
    const auto any = io::lattice_from_json(load(in));
    Outcome o;
    if (const auto* C = std::get_if<ChainLattice>(&any)) {
        const auto len = length(*C);
        o.out = {{"finite", len.has_value()}, {"length", len ? json(*len) : json()}};
        return o;
    }
    const auto& L = std::get<FiniteLattice>(any);
    const std::vector<Elem> ends{L.bottom(), L.top()};
    json series = json::array();
    for (auto x : composition_refine(L, ends)) series.push_back(L.label(x));
    o.out = {{"finite", true}, {"length", L.length()}, {"composition_series", series}};
    return o;
}

Outcome dimension_cmd(const std::string& in, const std::string& what, const std::string& serre) {
    const auto any = io::lattice_from_json(load(in));
    Outcome o;
    const bool krull = what == "krull";
    if (!krull && what != "gabriel") throw Error("BadParams", "--what must be krull or gabriel");
    std::visit([&](const auto& L) { o.out = {{"what", what}, {"value", (krull ? krull_dim(L) : gabriel_dim(L)).to_string()}}; }, any);
    if (!serre.empty()) {
        const auto* L = std::get_if<FiniteLattice>(&any);
        if (!L) throw Error("UnsupportedFormat", "Serre classes need a finite lattice");
        const auto C = io::serre_from_json(load(serre));
        const auto Lp = share(*L);
        const auto t = torsion(*L, C).t;
        const auto loc = localize(Lp, C);
        o.out["serre"] = {{"class", C.name}, {"torsion", L->label(t)}, {"quotient_size", loc.quotient.lattice->size()}};
    }
    return o;
}

Outcome quotient_cmd(const std::string& in, const std::string& cong) {
    const auto L = share(io::finite_lattice_from_json(load(in)));
    const auto R = io::congruence_from_json(load(cong), L->size());
    verify_congruence(*L, R, true);
    const auto Q = quotient_by_congruence(L, R);
    verify_hom(Q.projection);
    Outcome o;
    o.out = {{"quotient", io::to_json(*Q.lattice)}, {"projection", Q.projection.map},
             {"surjective", kernel_and_algebraicity(Q.projection).surjective}};
    return o;
}

Outcome sofic_verify(const std::string& qa_arg, const std::string& K_arg, const std::string& eps_arg, std::uint64_t n) {
    const auto qa = io::quasi_action_from_json(load(qa_arg));
    const auto K = qa.group().parse_set(K_arg);
    const auto H = qa.group().products(K, K);
    std::optional<Rational> eps;
    if (!eps_arg.empty()) eps = parse_rational(eps_arg);
    const auto cert = verify_quasi_action(qa, H, eps.value_or(Rational(1)));
    Outcome o;
    o.out = {{"certificate", io::to_json(cert)}, {"V", qa.size()}};
    const auto g = good_points(qa, K, n, eps);
    o.out["good_points"] = io::to_json(g, qa.group());
    o.pass = (!eps || cert.valid) && g.vbar_bound && g.w_bound && g.covering;
    return o;
}

Outcome surjunctivity_cmd(const std::string& shape, const std::string& ca, const std::string& mode, std::uint64_t samples, std::uint64_t seed) {
    Outcome o;
    if (!shape.empty()) {
        const auto r = surjunctivity_suite(io::shape_from_json(load(shape)), scan_mode(mode), samples, seed);
        o.out = {{"report", io::to_json(r)}};
        o.pass = r.ok();
        return o;
    }
    if (ca.empty()) throw Error("BadParams", "give --shape or --ca");
    const auto c = io::ca_from_json(load(ca));
    const auto a = inj_surj_analysis(c);
    const auto m = preimage_lattice_model(c);
    o.out = {{"injective", a.injective},
             {"surjective", a.surjective},
             {"kernel_size", a.kernel_size},
             {"image_index", a.image_index},
             {"lattice", {{"Phi_top", m.info.surjective}, {"Phi_injective", m.info.injective}, {"verdict_agrees", m.verdict_agrees}}}};
    o.pass = (!a.injective || a.surjective) && m.verdict_agrees && m.lemma_holds;
    return o;
}

Outcome stable_cmd(const std::string& ring, std::size_t k, const std::string& mode, std::uint64_t samples, std::uint64_t seed) {
    const auto r = stable_finiteness_check(load_ring(ring), k, scan_mode(mode), samples, seed);
    return {{{"report", io::to_json(r)}}, r.violations == 0};
}

Outcome duality_cmd(const std::string& ring, const std::string& check, const std::string& group, std::size_t n) {
    const auto R = load_ring(ring);
    Outcome o;
    if (check == "double-dual") {
        const auto r = double_dual_check(DualitySetting::of(R), free_module(R, n));
        o.out = {{"check", check}, {"ring", R.name()}, {"n", n}, {"ev", io::to_json(r.ev)}, {"module_hom", r.module_hom}, {"bijective", r.bijective}};
        o.pass = r.ok();
    } else if (check == "anti-iso") {
        const auto r = end_anti_iso(R, io::group_from_json(load(group)), n);
        o.out = {{"check", check}, {"report", io::to_json(r)}};
        o.pass = r.ok();
    } else {
        throw Error("BadParams", "--check must be double-dual or anti-iso");
    }
    return o;
}

Outcome replay_cmd(const std::string& inst, const std::string& qa_arg, std::size_t copies, std::uint64_t n, const std::string& eps, std::uint64_t seed) {
    const auto I = io::instance_from_json(load(inst));
    const auto qa = std::make_shared<const QuasiAction>(qa_arg.empty() ? self_action(I.M->G, copies) : io::quasi_action_from_json(load(qa_arg)));
    ReplayOptions opt;
    opt.n = n;
    opt.seed = seed;
    if (!eps.empty()) opt.eps = parse_rational(eps);
    const auto r = proof_construction(I, qa, opt);
    Outcome o;
    o.out = {{"instance", I.name}, {"replay", io::to_json(r)}};
    o.pass = r.claims_hold() && (!r.key || r.key_bound_holds) && (!r.conditions.cond1 || r.lower_bound_holds);
    return o;
}

Outcome run_cmd(const std::string& config, std::uint64_t seed, bool seed_given, std::string& out_path) {
    suites::SuiteConfig cfg;
    if (config.empty()) {
        cfg = suites::SuiteConfig::defaults();
    } else {
        json j;
        try {
            j = io::read_file(config);
        } catch (const Error& e) {
            throw Error("ConfigError", e.what());
        }
        cfg = suites::SuiteConfig::from_json(j);
    }
    if (seed_given) cfg.seed = seed;
    if (out_path.empty() && cfg.output) out_path = *cfg.output;
    const auto rep = suites::run(cfg, [](const suites::SuiteResult& r) {
        std::cerr << (r.ok ? "pass " : "FAIL ") << r.name << (r.expected_failure ? " (expected failures)" : "") << "\n";
    });
    auto j = suites::to_json(rep);
    j.erase("schema");
    j.erase("kind");
    return {j, rep.ok()};
}

Outcome export_cmd(const std::string& in, const std::string& format) {
    const auto j = load(in);
    const bool lattice = j.is_object() && (j.contains("elements") || (j.contains("kind") && j.at("kind").is_string() &&
                                                                        std::string("divisor chain boolean diamond pentagon subspaces")
                                                                                .find(j.at("kind").get<std::string>()) != std::string::npos));
    Outcome o;
    if (format == "dot") {
        if (!lattice) throw Error("UnsupportedFormat", "only lattices export to DOT");
        o.out = io::to_dot(io::lattice_from_json(j));
    } else if (format == "json") {
        o.out = lattice ? std::visit([](const auto& L) { return io::to_json(L); }, io::lattice_from_json(j)) : j;
    } else {
        throw Error("UnsupportedFormat", "format must be json or dot");
    }
    return o;
}

void emit(const Outcome& o, const std::string& kind, const std::string& path) {
    std::string text;
    if (o.out.is_string()) {
        text = o.out.get<std::string>();
    } else {
        auto j = o.out;
        if (kind != "export") {
            if (!j.contains("schema")) j = stamped(j, kind);
            j["pass"] = o.pass;
        }
        text = io::dump(j);
    }
    if (path.empty())
        std::cout << text;
    else
        io::write_file(path, text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite checks for qframes with group actions"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out;
    std::uint64_t seed = 1;
    app.add_option("--out", out, "Write the JSON result here instead of stdout");
    auto* seed_opt = app.add_option("--seed", seed, "Seed for every sampled check");

    std::string in, hom, what = "krull", serre, cong, qa, K, eps, shape, ca, mode = "automatic", ring, check = "double-dual", group = "cyclic:2",
                                 instance, config, format = "json";
    std::uint64_t n = 10, samples = 100000;
    std::size_t k = 1, copies = 1, rank = 1;

    auto* c_check = app.add_subcommand("check-qframe", "Decide whether a lattice is a qframe; optionally verify a hom");
    c_check->add_option("--in", in, "Lattice JSON")->required();
    c_check->add_option("--hom", hom, "Hom JSON {\"map\", \"target\"?}");

    auto* c_length = app.add_subcommand("length", "Length and a composition series");
    c_length->add_option("--in", in, "Lattice JSON")->required();

    auto* c_dim = app.add_subcommand("dimension", "Krull or Gabriel dimension");
    c_dim->add_option("--in", in, "Lattice JSON")->required();
    c_dim->add_option("--what", what, "krull | gabriel");
    c_dim->add_option("--serre", serre, "Serre class JSON; adds torsion and localization");

    auto* c_quot = app.add_subcommand("quotient", "Quotient by a strong congruence");
    c_quot->add_option("--in", in, "Lattice JSON")->required();
    c_quot->add_option("--congruence", cong, "Congruence JSON {\"classes\"}")->required();

    auto* c_sofic = app.add_subcommand("sofic-verify", "Certify a quasi-action and compute good points");
    c_sofic->add_option("--qa", qa, "Quasi-action JSON")->required();
    c_sofic->add_option("--K", K, "Symmetric window, e.g. \"{-1,0,1}\"")->required();
    c_sofic->add_option("--eps", eps, "Rational epsilon; measured when absent");
    c_sofic->add_option("--n", n, "Bound parameter n");

    auto* c_surj = app.add_subcommand("surjunctivity", "Injective implies surjective for linear CAs");
    c_surj->add_option("--shape", shape, "Shape JSON: enumerate every CA of the shape");
    c_surj->add_option("--ca", ca, "Single CA JSON");
    c_surj->add_option("--mode", mode, "exhaustive | sample");
    c_surj->add_option("--samples", samples, "Samples in sample mode");

    auto* c_stable = app.add_subcommand("stable-finiteness", "xy = 1 implies yx = 1 in Mat_k(S)");
    c_stable->add_option("--ring", ring, "Ring JSON, crossed product JSON or short form")->required();
    c_stable->add_option("--k", k, "Matrix size");
    c_stable->add_option("--mode", mode, "exhaustive | sample");
    c_stable->add_option("--samples", samples, "Samples in sample mode");

    auto* c_dual = app.add_subcommand("duality", "Double dual or the End anti-isomorphism");
    c_dual->add_option("--ring", ring, "Ring, e.g. \"Z/4\"")->required();
    c_dual->add_option("--check", check, "double-dual | anti-iso");
    c_dual->add_option("--G", group, "Group, e.g. cyclic:2");
    c_dual->add_option("--n", rank, "Rank of the free module");

    auto* c_replay = app.add_subcommand("replay-main-theorem", "Replay the main construction on an instance");
    c_replay->add_option("--instance", instance, "Instance JSON")->required();
    c_replay->add_option("--qa", qa, "Quasi-action JSON by the instance's group");
    c_replay->add_option("--copies", copies, "Copies of the exact action when --qa is absent");
    auto* replay_n = c_replay->add_option("--n", n, "Bound parameter n; defaults to 2|H|l");
    c_replay->add_option("--eps", eps, "Rational epsilon; measured when absent");

    auto* c_run = app.add_subcommand("run", "Run the check suites");
    c_run->add_option("--config", config, "Suite config JSON; all default suites when absent");

    auto* c_export = app.add_subcommand("export", "Canonical JSON or DOT");
    c_export->add_option("--in", in, "Input JSON")->required();
    c_export->add_option("--format", format, "json | dot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string kind;
    try {
        Outcome o;
        if (*c_check) {
            kind = "check-qframe";
            o = check_qframe(in, hom);
        } else if (*c_length) {
            kind = "length";
            o = length_cmd(in);
        } else if (*c_dim) {
            kind = "dimension";
            o = dimension_cmd(in, what, serre);
        } else if (*c_quot) {
            kind = "quotient";
            o = quotient_cmd(in, cong);
        } else if (*c_sofic) {
            kind = "sofic-verify";
            o = sofic_verify(qa, K, eps, n);
        } else if (*c_surj) {
            kind = "surjunctivity";
            o = surjunctivity_cmd(shape, ca, mode == "automatic" ? "exhaustive" : mode, samples, seed);
        } else if (*c_stable) {
            kind = "stable-finiteness";
            o = stable_cmd(ring, k, mode, samples, seed);
        } else if (*c_dual) {
            kind = "duality";
            o = duality_cmd(ring, check, group, rank);
        } else if (*c_replay) {
            kind = "replay-main-theorem";
            o = replay_cmd(instance, qa, copies, replay_n->count() ? n : 0, eps, seed);
        } else if (*c_run) {
            kind = "report";
            o = run_cmd(config, seed, seed_opt->count() > 0, out);
        } else if (*c_export) {
            kind = "export";
            o = export_cmd(in, format);
        }
        emit(o, kind, out);
        return o.pass ? 0 : 1;
    } catch (const Error& e) {
        json err{{"schema", io::schema}, {"kind", kind}, {"error", e.code()}, {"message", e.what()}, {"witness", e.witness()}};
        std::cerr << io::dump(err);
        return usage_error(e.code()) ? 2 : 1;
    }
}
