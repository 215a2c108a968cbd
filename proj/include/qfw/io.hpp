#pragma once

// JSON and DOT serialization. Objects carry "schema": "qfw/1"; keys come out
// sorted and element order is fixed, so dumps are byte-stable.

#include "qfw/dimension.hpp"
#include "qfw/duality.hpp"
#include "qfw/engine.hpp"

#include <json.hpp>

#include <variant>

namespace qfw::io {

using json = nlohmann::json;

inline constexpr const char* schema = "qfw/1";

// Canonical text: two-space indent, trailing newline.
std::string dump(const json& j);
// Throws ParseError.
json parse(const std::string& text);
json read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

using AnyLattice = std::variant<FiniteLattice, ChainLattice>;

// {"elements": n, "leq": [[i, j], ...]} (pairs are closed), or
// {"kind": "divisor" | "chain" | "boolean" | "diamond" | "pentagon", ...}.
AnyLattice lattice_from_json(const json& j, const Caps& caps = default_caps());
FiniteLattice finite_lattice_from_json(const json& j, const Caps& caps = default_caps());
// Cover pairs, labels, and values when present.
json to_json(const FiniteLattice& L);
json to_json(const ChainLattice& C);
bool same_lattice(const FiniteLattice& a, const FiniteLattice& b);

// Hasse diagram: one node per element, one edge per cover, bottom first.
std::string to_dot(const FiniteLattice& L);
// Throws UnsupportedFormat for infinite chains.
std::string to_dot(const AnyLattice& L);
// Reads back what to_dot writes. Throws ParseError.
FiniteLattice lattice_from_dot(const std::string& dot);

// {"map": [...]}, verified.
QframeHom hom_from_json(const json& j, LatticePtr source, LatticePtr target);
json to_json(const QframeHom& f);
// {"classes": [[...], ...]}
Congruence congruence_from_json(const json& j, std::size_t n);
json to_json(const Congruence& R);

// Short forms "Z/4", "F_2", "F_4", "F_9", or JSON {"kind": "Fq", "p", "poly"},
// {"kind": "zmod", "n"}, {"kind": "matrix", "over", "k"}, or explicit structure.
FiniteRing ring_from_json(const json& j);
FiniteRing parse_ring(const std::string& text);
json to_json(const FiniteRing& R);  // explicit structure constants

// "cyclic:3", "klein", "trivial", or {"kind": "cyclic", "n"}, {"kind": "product",
// "factors"}, {"kind": "table", "order", "table", "names"}.
FiniteGroup group_from_json(const json& j);
FiniteGroup parse_group(const std::string& text);
json to_json(const FiniteGroup& G);  // table form

json to_json(const Matrix& A);  // nested rows
Matrix matrix_from_json(const json& j, std::uint32_t m);

// {"ring", "group", "crossed": {"sigma": [matrix], "tau": [row]}}; group ring
// when "crossed" is absent.
CrossedProductSpec crossed_from_json(const json& j);
json to_json(const CrossedProductSpec& C);

// {"ring", "m", "k", "act": [matrix]} or {"ring", "kind": "regular" | "free", "n"}.
FiniteModule module_from_json(const json& j);
json to_json(const FiniteModule& M);

// {"group", "module", "memory": ["e", "t"], "local": [matrix, ...]}.
LinearCA ca_from_json(const json& j);
json to_json(const LinearCA& ca);
// {"name", "group", "module", "memory"?}; memory defaults to all of G.
CAShape shape_from_json(const json& j);

// {"group"?: {"kind": "Z", "d"} or a finite group, "V", "perms": {word: perm}}.
QuasiAction quasi_action_from_json(const json& j);
json to_json(const QuasiAction& qa);
json group_json(const DiscreteGroup& G);
DiscreteGroup discrete_group_from_json(const json& j);

// Explicit form {"kind": "explicit", "group", "lattice", "rho", "Phi", "ybar", "F", "K"}
// or a module form {"kind": "module", "crossed", "phi": element, "ybar": [rows],
// "F", "K"} where Phi multiplies on the right by phi in the regular module.
// Checks the G-qframe axioms on load.
MainInstance instance_from_json(const json& j);
json to_json(const MainInstance& I);

json to_json(const SoficCertificate& c);
json to_json(const GoodPoints& g, const DiscreteGroup& G);
json to_json(const ProofReplay& r);
json to_json(const KeyLemmaReport& k);
json to_json(const Exclusivity& e);
json to_json(const AntiIsoReport& r);
json to_json(const ShapeReport& r);
json to_json(const StableFinitenessReport& r);
json to_json(const DimensionValue& d);

// {"kind": "gdim_le", "alpha": "1"} or {"kind": "primary", "p": 2}.
SerreClass serre_from_json(const json& j);

std::vector<GElem> group_elements_from_json(const FiniteGroup& G, const json& j);

}  // namespace qfw::io
