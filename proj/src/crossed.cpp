#include "qfw/algebra.hpp"

namespace qfw {

CrossedProductSpec CrossedProductSpec::group_ring(FiniteRing R, FiniteGroup G) {
    const auto n = G.size();
    CrossedProductSpec s{std::move(R), std::move(G), {}, {}};
    s.sigma.assign(n, Matrix::identity(s.R.dim(), s.R.modulus()));
    s.tau.assign(n * n, s.R.one());
    return s;
}

Row CrossedProduct::element(const Row& r, GElem g) const {
    const auto d = spec_.R.dim();
    Row x(ring_.dim(), 0);
    for (std::size_t i = 0; i < d; ++i) x[g * d + i] = r[i];
    return x;
}

Row CrossedProduct::coefficient(const Row& x, GElem g) const {
    const auto d = spec_.R.dim();
    return Row(x.begin() + static_cast<std::ptrdiff_t>(g * d), x.begin() + static_cast<std::ptrdiff_t>((g + 1) * d));
}

Row CrossedProduct::convolve(const Row& x, const Row& y) const {
    const auto& R = spec_.R;
    const auto& G = spec_.G;
    std::vector<Row> out(G.size(), R.zero());
    for (GElem g = 0; g < G.size(); ++g)
        for (GElem h = 0; h < G.size(); ++h) {
            const auto term = R.mul(R.mul(coefficient(x, g), spec_.act(g, coefficient(y, h))), spec_.t(g, h));
            auto& slot = out[G.mul(g, h)];
            slot = R.add(slot, term);
        }
    Row z;
    for (const auto& c : out) z.insert(z.end(), c.begin(), c.end());
    return z;
}

CrossedProduct verify_crossed(CrossedProductSpec spec, const Caps& caps) {
    const auto& R = spec.R;
    const auto& G = spec.G;
    const auto n = G.size(), d = R.dim();
    const auto e = G.identity();
    if (spec.sigma.size() != n || spec.tau.size() != n * n) throw Error("CrossViolation", "sigma or tau has the wrong size", {0});
    for (GElem g = 0; g < n; ++g) R.verify_automorphism(spec.sigma[g], g);
    std::vector<Row> tau_inv(n * n);
    for (GElem g = 0; g < n; ++g)
        for (GElem h = 0; h < n; ++h) {
            auto inv = R.inverse(spec.t(g, h));
            if (!inv) throw Error("NotUnit", "tau(g,h) is not a unit", {g, h});
            tau_inv[g * n + h] = std::move(*inv);
        }
    if (spec.sigma[e] != Matrix::identity(d, R.modulus())) throw Error("CrossViolation", "sigma(e) != 1", {1, e});
    for (GElem g = 0; g < n; ++g)
        if (spec.t(g, e) != R.one() || spec.t(e, g) != R.one()) throw Error("CrossViolation", "tau not normalized", {1, g});
    for (GElem a = 0; a < n; ++a)
        for (GElem b = 0; b < n; ++b)
            for (GElem c = 0; c < n; ++c) {
                const auto lhs = R.mul(spec.t(a, b), spec.t(G.mul(a, b), c));
                const auto rhs = R.mul(spec.act(a, spec.t(b, c)), spec.t(a, G.mul(b, c)));
                if (lhs != rhs) throw Error("CrossViolation", "cocycle condition fails", {2, a, b, c});
            }
    // both sides of (Cross.3) are additive in r, so basis vectors decide it
    std::vector<Row> rs;
    if (R.order() <= caps.ring_order)
        rs = R.elements(caps);
    else
        for (std::size_t i = 0; i < d; ++i) rs.push_back(R.basis(i));
    for (GElem a = 0; a < n; ++a)
        for (GElem b = 0; b < n; ++b)
            for (const auto& r : rs) {
                const auto lhs = spec.act(a, spec.act(b, r));
                const auto rhs = R.mul(R.mul(spec.t(a, b), spec.act(G.mul(a, b), r)), tau_inv[a * n + b]);
                if (lhs != rhs)
                    throw Error("CrossViolation", "twisted action condition fails", {3, a, b, static_cast<std::int64_t>(R.index(r))});
            }

    const auto D = n * d;
    std::vector<Row> products(D * D, Row(D, 0));
    for (GElem g = 0; g < n; ++g)
        for (std::size_t i = 0; i < d; ++i)
            for (GElem h = 0; h < n; ++h)
                for (std::size_t j = 0; j < d; ++j) {
                    const auto c = R.mul(R.mul(R.basis(i), spec.act(g, R.basis(j))), spec.t(g, h));
                    auto& out = products[(g * d + i) * D + h * d + j];
                    const auto gh = G.mul(g, h);
                    for (std::size_t l = 0; l < d; ++l) out[gh * d + l] = c[l];
                }
    Row one(D, 0);
    for (std::size_t l = 0; l < d; ++l) one[e * d + l] = R.one()[l];
    const bool plain = spec.tau == std::vector<Row>(n * n, R.one()) &&
                       spec.sigma == std::vector<Matrix>(n, Matrix::identity(d, R.modulus()));
    const auto name = R.name() + (plain ? "[" + G.kind() + "]" : "*" + G.kind());
    CrossedProduct C;
    C.ring_ = FiniteRing::from_structure(R.modulus(), D, std::move(products), std::move(one), name);
    C.spec_ = std::move(spec);
    return C;
}

}  // namespace qfw
