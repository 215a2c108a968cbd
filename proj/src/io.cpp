#include "qfw/io.hpp"

#include <fstream>
#include <regex>
#include <sstream>

namespace qfw::io {

namespace {

std::int64_t i64(std::uint64_t x) { return static_cast<std::int64_t>(x); }

const json& at(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error("ParseError", std::string("missing key \"") + key + "\"");
    return j.at(key);
}

template <class T>
T get(const json& j, const char* key) {
    try {
        return at(j, key).get<T>();
    } catch (const json::exception& e) {
        throw Error("ParseError", std::string("bad value for \"") + key + "\": " + e.what());
    }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    return j.is_object() && j.contains(key) ? get<T>(j, key) : fallback;
}

json stamp(json j) {
    j["schema"] = schema;
    return j;
}

std::string str(const Rational& r) { return format_rational(r); }

json words(const DiscreteGroup& G, const std::vector<GroupWord>& ws) {
    json out = json::array();
    for (const auto& w : ws) out.push_back(G.format(w));
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::optional<FiniteRing> galois_field(std::uint32_t p, std::uint32_t e) {
    if (e == 1) return FiniteRing::zmod(p);
    // first monic irreducible of degree e, coefficients low to high
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < e; ++i) total *= p;
    for (std::uint64_t t = 0; t < total; ++t) {
        std::vector<std::uint32_t> poly(e + 1, 0);
        auto x = t;
        for (std::uint32_t i = 0; i < e; ++i) {
            poly[i] = static_cast<std::uint32_t>(x % p);
            x /= p;
        }
        poly[e] = 1;
        if (poly[0] == 0) continue;
        try {
            return FiniteRing::fq(p, poly);
        } catch (const Error& err) {
            if (err.code() != "NotIrreducible") throw;
        }
    }
    return std::nullopt;
}

}  // namespace

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("ParseError", e.what());
    }
}

json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("ParseError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("IOError", "cannot write " + path);
    out << text;
}

// lattices

AnyLattice lattice_from_json(const json& j, const Caps& caps) {
    if (j.is_object() && j.contains("kind")) {
        const auto kind = get<std::string>(j, "kind");
        if (kind == "divisor") return FiniteLattice::divisor(get<std::uint64_t>(j, "n"));
        if (kind == "boolean") return FiniteLattice::boolean(get<std::size_t>(j, "atoms"));
        if (kind == "diamond") return FiniteLattice::diamond();
        if (kind == "pentagon") return FiniteLattice::pentagon();
        if (kind == "subspaces") {
            const auto p = get<std::uint32_t>(j, "p");
            const auto d = get<std::size_t>(j, "d");
            const auto M = FiniteModule::make(FiniteRing::zmod(p), p, d, {Matrix::identity(d, p)});
            return *submodule_lattice(M, caps).lattice();
        }
        if (kind == "chain") {
            ChainLattice C;
            const auto& a = at(j, "alpha");
            C.alpha = a.is_number() ? Ordinal::finite(a.get<std::uint64_t>()) : Ordinal::parse(a.get<std::string>());
            const auto o = get_or<std::string>(j, "orientation", "standard");
            if (o != "standard" && o != "reversed") throw Error("ParseError", "orientation must be standard or reversed");
            C.orientation = o == "reversed" ? Orientation::reversed : Orientation::standard;
            return C;
        }
        if (kind != "explicit") throw Error("ParseError", "unknown lattice kind " + kind);
    }
    const auto n = get<std::size_t>(j, "elements");
    std::vector<std::pair<Elem, Elem>> pairs;
    for (const auto& p : at(j, "leq")) {
        if (!p.is_array() || p.size() != 2) throw Error("ParseError", "leq entries are pairs");
        const auto a = p[0].get<Elem>(), b = p[1].get<Elem>();
        if (a >= n || b >= n) throw Error("ParseError", "element out of range", {a, b});
        pairs.emplace_back(a, b);
    }
    auto L = FiniteLattice::from_pairs(n, pairs, caps);
    if (j.contains("labels")) L.set_labels(j.at("labels").get<std::vector<std::string>>());
    if (j.contains("values")) L.set_values(j.at("values").get<std::vector<std::uint64_t>>());
    return L;
}

FiniteLattice finite_lattice_from_json(const json& j, const Caps& caps) {
    auto any = lattice_from_json(j, caps);
    if (auto* L = std::get_if<FiniteLattice>(&any)) return std::move(*L);
    const auto& C = std::get<ChainLattice>(any);
    const auto len = length(C);
    if (!len) throw Error("UnsupportedFormat", "infinite chain " + C.alpha.to_string());
    return FiniteLattice::chain(*len);
}

json to_json(const FiniteLattice& L) {
    json leq = json::array();
    for (Elem x = 0; x < L.size(); ++x)
        for (auto y : L.upper_covers(x)) leq.push_back({x, y});
    json j{{"elements", L.size()}, {"leq", std::move(leq)}};
    if (!L.labels().empty()) j["labels"] = L.labels();
    if (!L.values().empty()) j["values"] = L.values();
    return stamp(std::move(j));
}

json to_json(const ChainLattice& C) {
    return stamp({{"kind", "chain"},
                  {"alpha", C.alpha.to_string()},
                  {"orientation", C.orientation == Orientation::reversed ? "reversed" : "standard"}});
}

bool same_lattice(const FiniteLattice& a, const FiniteLattice& b) {
    if (a.size() != b.size() || a.labels() != b.labels() || a.values() != b.values()) return false;
    for (Elem x = 0; x < a.size(); ++x)
        for (Elem y = 0; y < a.size(); ++y)
            if (a.leq(x, y) != b.leq(x, y)) return false;
    return true;
}

std::string to_dot(const FiniteLattice& L) {
    std::ostringstream os;
    os << "digraph hasse {\n  rankdir=BT;\n";
    for (Elem x = 0; x < L.size(); ++x)
        os << "  n" << x << " [label=\"" << dot_escape(L.labels().empty() ? std::to_string(x) : L.label(x)) << "\"];\n";
    for (Elem x = 0; x < L.size(); ++x)
        for (auto y : L.upper_covers(x)) os << "  n" << x << " -> n" << y << ";\n";
    os << "}\n";
    return os.str();
}

std::string to_dot(const AnyLattice& L) {
    if (const auto* F = std::get_if<FiniteLattice>(&L)) return to_dot(*F);
    const auto& C = std::get<ChainLattice>(L);
    const auto len = length(C);
    if (!len) throw Error("UnsupportedFormat", "DOT needs a finite carrier; chain " + C.alpha.to_string() + " is infinite");
    auto chain = FiniteLattice::chain(*len);
    std::vector<std::string> labels;
    for (std::uint64_t i = 0; i <= *len; ++i)
        labels.push_back(std::to_string(C.orientation == Orientation::reversed ? *len - i : i));
    chain.set_labels(std::move(labels));
    return to_dot(chain);
}

FiniteLattice lattice_from_dot(const std::string& dot) {
    static const std::regex node(R"re(^\s*n(\d+)\s*\[label="((?:[^"\\]|\\.)*)"\];\s*$)re");
    static const std::regex edge(R"(^\s*n(\d+)\s*->\s*n(\d+);\s*$)");
    std::vector<std::string> labels;
    std::vector<std::pair<Elem, Elem>> pairs;
    std::istringstream in(dot);
    std::string line;
    bool numeric = true;
    while (std::getline(in, line)) {
        std::smatch m;
        if (std::regex_match(line, m, node)) {
            const auto id = std::stoul(m[1]);
            if (id != labels.size()) throw Error("ParseError", "nodes out of order", {i64(id)});
            std::string label;
            const std::string raw = m[2];
            for (std::size_t i = 0; i < raw.size(); ++i) label += raw[i] == '\\' && i + 1 < raw.size() ? raw[++i] : raw[i];
            numeric = numeric && label == std::to_string(id);
            labels.push_back(std::move(label));
        } else if (std::regex_match(line, m, edge)) {
            pairs.emplace_back(static_cast<Elem>(std::stoul(m[1])), static_cast<Elem>(std::stoul(m[2])));
        }
    }
    if (labels.empty()) throw Error("ParseError", "no nodes in DOT input");
    for (const auto& [a, b] : pairs)
        if (a >= labels.size() || b >= labels.size()) throw Error("ParseError", "edge to an unknown node", {a, b});
    auto L = FiniteLattice::from_pairs(labels.size(), pairs);
    if (!numeric) L.set_labels(std::move(labels));
    return L;
}

QframeHom hom_from_json(const json& j, LatticePtr source, LatticePtr target) {
    auto map = get<std::vector<Elem>>(j, "map");
    if (map.size() != source->size()) throw Error("ParseError", "map has the wrong length", {i64(map.size())});
    for (auto y : map)
        if (y >= target->size()) throw Error("ParseError", "map value out of range", {y});
    return verify_hom(std::move(source), std::move(target), std::move(map));
}

json to_json(const QframeHom& f) { return stamp({{"map", f.map}}); }

Congruence congruence_from_json(const json& j, std::size_t n) {
    return Congruence::from_classes(n, get<std::vector<std::vector<Elem>>>(j, "classes"));
}

json to_json(const Congruence& R) { return stamp({{"classes", R.class_lists()}}); }

// rings and groups

FiniteRing parse_ring(const std::string& text) {
    static const std::regex zmod(R"(^\s*Z/(\d+)\s*$)");
    static const std::regex field(R"(^\s*(?:F_|GF\()(\d+)\)?\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, zmod)) return FiniteRing::zmod(static_cast<std::uint32_t>(std::stoul(m[1])));
    if (std::regex_match(text, m, field)) {
        const auto q = std::stoul(m[1]);
        std::uint32_t p = 2;
        while (p <= q && q % p) ++p;
        std::uint32_t e = 0;
        auto r = q;
        while (r % p == 0) r /= p, ++e;
        if (q < 2 || r != 1) throw Error("ParseError", "no field of order " + std::to_string(q));
        if (auto F = galois_field(p, e)) return *F;
    }
    throw Error("ParseError", "unknown ring \"" + text + "\"");
}

FiniteRing ring_from_json(const json& j) {
    if (j.is_string()) return parse_ring(j.get<std::string>());
    const auto kind = get<std::string>(j, "kind");
    if (kind == "Fq") {
        const auto p = get<std::uint32_t>(j, "p");
        if (j.contains("poly")) return FiniteRing::fq(p, get<std::vector<std::uint32_t>>(j, "poly"));
        return parse_ring("F_" + std::to_string(get<std::uint64_t>(j, "q")));
    }
    if (kind == "zmod") return FiniteRing::zmod(get<std::uint32_t>(j, "n"));
    if (kind == "matrix") return FiniteRing::matrix(ring_from_json(at(j, "over")), get<std::size_t>(j, "k"));
    if (kind == "structure") {
        auto products = get<std::vector<Row>>(j, "products");
        return FiniteRing::from_structure(get<std::uint32_t>(j, "m"), get<std::size_t>(j, "d"), std::move(products), get<Row>(j, "one"),
                                          get_or<std::string>(j, "name", "R"));
    }
    throw Error("ParseError", "unknown ring kind " + kind);
}

json to_json(const FiniteRing& R) {
    json products = json::array();
    for (std::size_t i = 0; i < R.dim(); ++i)
        for (std::size_t k = 0; k < R.dim(); ++k) products.push_back(R.basis_product(i, k));
    return stamp({{"kind", "structure"}, {"m", R.modulus()}, {"d", R.dim()}, {"products", products}, {"one", R.one()}, {"name", R.name()}});
}

FiniteGroup parse_group(const std::string& text) {
    const auto x = text.find('x');
    if (x != std::string::npos && text.rfind("klein", 0) != 0) return FiniteGroup::product(parse_group(text.substr(0, x)), parse_group(text.substr(x + 1)));
    static const std::regex cyc(R"(^\s*(?:cyclic:|Z/|C)(\d+)\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, cyc)) return FiniteGroup::cyclic(std::stoul(m[1]));
    if (text == "klein") return FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
    if (text == "trivial") return FiniteGroup::trivial();
    throw Error("ParseError", "unknown group \"" + text + "\"");
}

FiniteGroup group_from_json(const json& j) {
    if (j.is_string()) return parse_group(j.get<std::string>());
    const auto kind = get<std::string>(j, "kind");
    if (kind == "cyclic") return FiniteGroup::cyclic(get<std::size_t>(j, "n"));
    if (kind == "product") {
        const auto& fs = at(j, "factors");
        if (!fs.is_array() || fs.empty()) throw Error("ParseError", "product needs factors");
        auto G = group_from_json(fs[0]);
        for (std::size_t i = 1; i < fs.size(); ++i) G = FiniteGroup::product(G, group_from_json(fs[i]));
        return G;
    }
    if (kind == "table") {
        auto G = FiniteGroup::from_table(get<std::size_t>(j, "order"), get<std::vector<GElem>>(j, "table"),
                                         get_or<std::vector<std::string>>(j, "names", {}));
        // keep a recognised label when it describes the same table
        const auto label = get_or<std::string>(j, "label", "table");
        if (label == "table") return G;
        try {
            auto H = parse_group(label);
            if (H.size() != G.size() || H.names() != G.names()) return G;
            for (GElem a = 0; a < G.size(); ++a)
                for (GElem b = 0; b < G.size(); ++b)
                    if (H.mul(a, b) != G.mul(a, b)) return G;
            return H;
        } catch (const Error&) {
            return G;
        }
    }
    throw Error("ParseError", "unknown group kind " + kind);
}

json to_json(const FiniteGroup& G) {
    std::vector<GElem> table(G.size() * G.size());
    for (GElem a = 0; a < G.size(); ++a)
        for (GElem b = 0; b < G.size(); ++b) table[a * G.size() + b] = G.mul(a, b);
    return stamp({{"kind", "table"}, {"order", G.size()}, {"table", table}, {"names", G.names()}, {"label", G.kind()}});
}

SerreClass serre_from_json(const json& j) {
    const auto kind = get<std::string>(j, "kind");
    if (kind == "primary") return SerreClass::primary(get<std::uint64_t>(j, "p"));
    if (kind == "gdim_le") {
        const auto& a = at(j, "alpha");
        return SerreClass::gdim_le(a.is_number() ? Ordinal::finite(a.get<std::uint64_t>()) : Ordinal::parse(a.get<std::string>()));
    }
    throw Error("ParseError", "unknown Serre class kind \"" + kind + "\"");
}

std::vector<GElem> group_elements_from_json(const FiniteGroup& G, const json& j) {
    std::vector<GElem> out;
    for (const auto& x : j) {
        if (x.is_number_unsigned()) {
            const auto g = x.get<GElem>();
            if (g >= G.size()) throw Error("ParseError", "group element out of range", {g});
            out.push_back(g);
        } else {
            const auto g = G.find(x.get<std::string>());
            if (!g) throw Error("ParseError", "unknown group element " + x.get<std::string>());
            out.push_back(*g);
        }
    }
    return out;
}

json to_json(const Matrix& A) {
    json rows = json::array();
    for (std::size_t i = 0; i < A.rows; ++i) rows.push_back(A.row_vec(i));
    return rows;
}

Matrix matrix_from_json(const json& j, std::uint32_t m) {
    if (!j.is_array()) throw Error("ParseError", "matrix must be a list of rows");
    const auto rows = j.size(), cols = rows ? j[0].size() : 0;
    Matrix A(rows, cols, m);
    for (std::size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw Error("ParseError", "ragged matrix", {i64(i)});
        for (std::size_t c = 0; c < cols; ++c) A(i, c) = zmod::reduce(j[i][c].get<std::int64_t>(), m);
    }
    return A;
}

CrossedProductSpec crossed_from_json(const json& j) {
    auto spec = CrossedProductSpec::group_ring(ring_from_json(at(j, "ring")), group_from_json(at(j, "group")));
    if (!j.contains("crossed")) return spec;
    const auto& c = j.at("crossed");
    const auto m = spec.R.modulus();
    if (c.contains("sigma")) {
        const auto& s = c.at("sigma");
        if (s.size() != spec.G.size()) throw Error("ParseError", "one sigma per group element");
        for (std::size_t g = 0; g < s.size(); ++g) spec.sigma[g] = matrix_from_json(s[g], m);
    }
    if (c.contains("tau")) {
        const auto& t = c.at("tau");
        if (t.size() != spec.tau.size()) throw Error("ParseError", "tau needs |G|^2 entries");
        for (std::size_t i = 0; i < t.size(); ++i) spec.tau[i] = t[i].get<Row>();
    }
    return spec;
}

json to_json(const CrossedProductSpec& C) {
    json sigma = json::array();
    for (const auto& s : C.sigma) sigma.push_back(to_json(s));
    return stamp({{"ring", to_json(C.R)}, {"group", to_json(C.G)}, {"crossed", {{"sigma", sigma}, {"tau", C.tau}}}});
}

FiniteModule module_from_json(const json& j) {
    auto R = ring_from_json(at(j, "ring"));
    const auto kind = get_or<std::string>(j, "kind", "explicit");
    if (kind == "regular") return FiniteModule::regular(R);
    if (kind == "free") return free_module(R, get<std::size_t>(j, "n"));
    if (kind != "explicit") throw Error("ParseError", "unknown module kind " + kind);
    const auto m = get<std::uint32_t>(j, "m");
    const auto k = get<std::size_t>(j, "k");
    std::vector<Matrix> act;
    for (const auto& a : at(j, "act")) act.push_back(matrix_from_json(a, m));
    return FiniteModule::make(std::move(R), m, k, std::move(act));
}

json to_json(const FiniteModule& M) {
    json act = json::array();
    for (const auto& a : M.act) act.push_back(to_json(a));
    return stamp({{"ring", to_json(M.ring)}, {"m", M.m}, {"k", M.k}, {"act", act}});
}

LinearCA ca_from_json(const json& j) {
    auto G = group_from_json(at(j, "group"));
    auto N = module_from_json(at(j, "module"));
    auto F = group_elements_from_json(G, at(j, "memory"));
    std::vector<Matrix> A;
    for (const auto& a : at(j, "local")) A.push_back(matrix_from_json(a, N.m));
    if (A.size() != F.size()) throw Error("ParseError", "one local matrix per memory element");
    return LinearCA::make(std::move(G), std::move(N), std::move(F), std::move(A));
}

json to_json(const LinearCA& ca) {
    json memory = json::array(), local = json::array();
    for (auto f : ca.F) memory.push_back(ca.G.name(f));
    for (const auto& a : ca.A) local.push_back(to_json(a));
    return stamp({{"group", to_json(ca.G)}, {"module", to_json(ca.N)}, {"memory", memory}, {"local", local}});
}

CAShape shape_from_json(const json& j) {
    CAShape s{get_or<std::string>(j, "name", "shape"), group_from_json(at(j, "group")), module_from_json(at(j, "module")), {}};
    if (j.contains("memory")) s.F = group_elements_from_json(s.G, j.at("memory"));
    return s;
}

// quasi-actions

DiscreteGroup discrete_group_from_json(const json& j) {
    if (j.is_object() && get_or<std::string>(j, "kind", "") == "Z") return DiscreteGroup::lattice(get_or<std::size_t>(j, "d", 1));
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "Z") return DiscreteGroup::lattice(1);
        if (s.rfind("Z^", 0) == 0) return DiscreteGroup::lattice(std::stoul(s.substr(2)));
    }
    return DiscreteGroup::finite(group_from_json(j));
}

json group_json(const DiscreteGroup& G) {
    if (G.is_finite()) return to_json(G.finite_group());
    return {{"kind", "Z"}, {"d", G.rank()}};
}

QuasiAction quasi_action_from_json(const json& j) {
    auto G = j.contains("group") ? discrete_group_from_json(j.at("group")) : DiscreteGroup::lattice(1);
    QuasiAction qa(G, get<std::size_t>(j, "V"));
    const auto& perms = at(j, "perms");
    if (!perms.is_object()) throw Error("ParseError", "perms must map group words to permutations");
    for (const auto& [key, p] : perms.items()) qa.set(G.parse(key), p.get<Perm>());
    return qa;
}

json to_json(const QuasiAction& qa) {
    json perms = json::object();
    for (const auto& [w, p] : qa.domain()) perms[qa.group().format(w)] = p;
    return stamp({{"group", group_json(qa.group())}, {"V", qa.size()}, {"perms", perms}});
}

// instances

MainInstance instance_from_json(const json& j) {
    const auto kind = get<std::string>(j, "kind");
    MainInstance I;
    I.name = get_or<std::string>(j, "name", "instance");
    if (kind == "explicit") {
        auto G = group_from_json(at(j, "group"));
        auto L = share(finite_lattice_from_json(at(j, "lattice")));
        std::vector<QframeHom> rho;
        for (const auto& r : at(j, "rho")) rho.push_back(hom_from_json({{"map", r}}, L, L));
        if (rho.size() != G.size()) throw Error("ParseError", "one rho per group element");
        auto M = std::make_shared<GQframe>(GQframe{G, L, std::move(rho)});
        verify_gqframe(*M);
        I.M = M;
        I.Phi = hom_from_json({{"map", at(j, "Phi")}}, L, L);
        I.ybar = get<Elem>(j, "ybar");
        if (I.ybar >= L->size()) throw Error("ParseError", "ybar out of range", {I.ybar});
    } else if (kind == "module") {
        const auto C = verify_crossed(crossed_from_json(at(j, "crossed")));
        const auto model = lattice_model(C, FiniteModule::regular(C.ring()));
        const auto phi = get<Row>(j, "phi");
        if (phi.size() != C.ring().dim()) throw Error("ParseError", "phi has the wrong length", {i64(phi.size())});
        I.M = std::make_shared<const GQframe>(GQframe::from_model(model));
        I.Phi = model.lift(model.M.action(phi)).Phi;
        std::vector<Row> rows;
        for (const auto& r : at(j, "ybar")) rows.push_back(r.get<Row>());
        const auto y = model.L.find(zmod::RowSpace::span(rows, model.M.m, model.M.k));
        if (!y) throw Error("ParseError", "ybar does not span a submodule");
        I.ybar = *y;
    } else {
        throw Error("ParseError", "unknown instance kind " + kind);
    }
    I.F = group_elements_from_json(I.M->G, at(j, "F"));
    I.K = group_elements_from_json(I.M->G, at(j, "K"));
    return I;
}

json to_json(const MainInstance& I) {
    json rho = json::array(), F = json::array(), K = json::array();
    for (const auto& r : I.M->rho) rho.push_back(r.map);
    for (auto g : I.F) F.push_back(I.M->G.name(g));
    for (auto g : I.K) K.push_back(I.M->G.name(g));
    auto L = to_json(*I.M->M);
    L.erase("schema");
    auto G = to_json(I.M->G);
    G.erase("schema");
    return stamp({{"kind", "explicit"}, {"name", I.name}, {"group", G}, {"lattice", L}, {"rho", rho}, {"Phi", I.Phi.map},
                  {"ybar", I.ybar}, {"F", F}, {"K", K}});
}

// reports

json to_json(const SoficCertificate& c) {
    json j{{"eps", str(c.eps)}, {"eps_mult", str(c.eps_mult)}, {"eps_free", str(c.eps_free)}, {"qa1", c.qa1}, {"qa2", c.qa2},
           {"qa3", c.qa3}, {"valid", c.valid}};
    return j;
}

json to_json(const GoodPoints& g, const DiscreteGroup& G) {
    return {{"H", words(G, g.H)},
            {"eps", str(g.eps)},
            {"eps_bound", str(g.eps_bound)},
            {"Vbar", g.Vbar.size()},
            {"W", g.W.size()},
            {"vbar_bound", g.vbar_bound},
            {"w_bound", g.w_bound},
            {"covering", g.covering},
            {"tie_break", g.tie_break}};
}

json to_json(const Exclusivity& e) {
    return {{"cond1", e.cond1}, {"cond2", e.cond2}, {"join_K", e.join_K}, {"join_length", e.join_length}, {"l", e.l}};
}

json to_json(const KeyLemmaReport& k) {
    return {{"covering", k.covering},       {"lengths", k.lengths},       {"hyp2_max", k.hyp2_max},   {"im_length", k.im_length},
            {"im_top_length", k.im_top_length}, {"W", k.W},               {"len_outside", k.len_outside}, {"len_KW", k.len_KW},
            {"est_outside", k.est_outside}, {"est_KW", k.est_KW},         {"estimate", k.estimate},   {"bound", str(k.bound)},
            {"holds", k.holds}};
}

json to_json(const ProofReplay& r) {
    json j{{"l", r.l},
           {"n", r.n},
           {"H", r.H.size()},
           {"V", r.V},
           {"Vbar", r.good.Vbar.size()},
           {"W", r.good.W.size()},
           {"eps", str(r.good.eps)},
           {"eps_bound", str(r.good.eps_bound)},
           {"conditions", to_json(r.conditions)},
           {"components", r.components},
           {"sigma_bijective", r.sigma_bijective},
           {"cong_join", r.cong_join},
           {"cong_meet", r.cong_meet},
           {"cong_max", r.cong_max},
           {"cong_meet_witness", r.cong_meet_witness},
           {"related_pairs", r.related_pairs},
           {"phi_compatible", r.phi_compatible},
           {"phibar_commutes", r.phibar_commutes},
           {"xbar_well_defined", r.xbar_well_defined},
           {"xbar_witness", r.xbar_witness},
           {"xbar_independent", r.xbar_independent},
           {"xbar_covering", r.xbar_covering},
           {"xbar_lengths", r.xbar_lengths},
           {"pi2_injective_on_Qe", r.pi2_injective_on_Qe},
           {"pi2_exhaustive", r.pi2_exhaustive},
           {"pi2_recovers_components", r.pi2_recovers_components},
           {"pi2_Qe_length", r.pi2_Qe_length},
           {"Qe_inside_image", r.Qe_inside_image},
           {"key_rejected", r.key_rejected},
           {"im_length", r.im_length},
           {"key_bound", str(r.key_bound)},
           {"key_bound_holds", r.key_bound_holds},
           {"lower_bound", str(r.lower_bound)},
           {"lower_bound_holds", r.lower_bound_holds},
           {"claims_hold", r.claims_hold()},
           {"bar_bar_V", "read as Vbar"}};
    j["L1_size"] = r.L1_size ? json(*r.L1_size) : json(nullptr);
    j["L2_size"] = r.L2_size ? json(*r.L2_size) : json(nullptr);
    j["phibar_hom"] = r.phibar_hom ? json(*r.phibar_hom) : json(nullptr);
    j["key"] = r.key ? to_json(*r.key) : json(nullptr);
    return stamp(std::move(j));
}

json to_json(const AntiIsoReport& r) {
    return stamp({{"ring", r.ring},
                  {"group", r.group},
                  {"n", r.n},
                  {"end_size", r.end_size},
                  {"matrix_size", r.matrix_size},
                  {"exhaustive", r.exhaustive},
                  {"dual_is_free", r.dual_is_free},
                  {"duals_equivariant", r.duals_equivariant},
                  {"injective", r.injective},
                  {"bijective", r.bijective},
                  {"identity_to_identity", r.identity_to_identity},
                  {"composition_checks", r.composition_checks},
                  {"composition_failures", r.composition_failures},
                  {"additivity_failures", r.additivity_failures},
                  {"bridge_failures", r.bridge_failures},
                  {"irreversible", r.irreversible},
                  {"surjunctive", r.surjunctive},
                  {"directly_finite", r.directly_finite},
                  {"verdicts_agree", r.verdicts_agree},
                  {"topology", DualitySetting::topology},
                  {"A", "identified with R"},
                  {"ok", r.ok()}});
}

json to_json(const ShapeReport& r) {
    return stamp({{"shape", r.shape},
                  {"local_maps", r.local_maps},
                  {"cas", r.cas},
                  {"exhaustive", r.exhaustive},
                  {"lattice_size", r.lattice_size},
                  {"structural", r.structural},
                  {"injective", r.injective},
                  {"surjective", r.surjective},
                  {"violations", r.violations},
                  {"lattice_disagreements", r.lattice_disagreements},
                  {"lemma_failures", r.lemma_failures},
                  {"hom_failures", r.hom_failures},
                  {"hom_full_checks", r.hom_full_checks},
                  {"hom_sampled_checks", r.hom_sampled_checks},
                  {"image_not_invariant", r.image_not_invariant},
                  {"enumeration_disagreements", r.enumeration_disagreements},
                  {"irreversible", r.irreversible},
                  {"equivariance_failures", r.equivariance_failures},
                  {"ok", r.ok()}});
}

json to_json(const StableFinitenessReport& r) {
    return stamp({{"ring", r.ring},
                  {"k", r.k},
                  {"order", r.order},
                  {"exhaustive", r.exhaustive},
                  {"checked", r.checked},
                  {"right_invertible", r.right_invertible},
                  {"violations", r.violations},
                  {"violation_indices", r.violation_indices}});
}

json to_json(const DimensionValue& d) { return d.to_string(); }

}  // namespace qfw::io
