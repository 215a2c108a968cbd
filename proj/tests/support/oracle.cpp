#include "oracle.hpp"

#include "qfw/error.hpp"

#include <algorithm>
#include <cstdio>

namespace oracle {

using qfw::Elem;

bool modular_by_pentagon(const qfw::FiniteLattice& L) {
    const auto n = static_cast<Elem>(L.size());
    for (Elem a = 0; a < n; ++a)
        for (Elem c = 0; c < n; ++c) {
            if (!L.lt(a, c)) continue;
            for (Elem b = 0; b < n; ++b)
                if (L.join(a, b) == L.join(c, b) && L.meet(a, b) == L.meet(c, b)) return false;
        }
    return true;
}

std::size_t big_omega(std::uint64_t n) {
    std::size_t k = 0;
    for (std::uint64_t p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            n /= p;
            ++k;
        }
    return k + (n > 1 ? 1 : 0);
}

std::uint64_t gaussian_binomial(unsigned n, unsigned k, std::uint64_t q) {
    if (k > n) return 0;
    std::uint64_t num = 1, den = 1;
    for (unsigned i = 0; i < k; ++i) {
        std::uint64_t a = 1, b = 1;
        for (unsigned e = 0; e < n - i; ++e) a *= q;
        for (unsigned e = 0; e < i + 1; ++e) b *= q;
        num *= a - 1;
        den *= b - 1;
    }
    return num / den;
}

qfw::FiniteLattice subspace_lattice_f2(unsigned d) {
    const unsigned n = 1U << d;
    auto close = [&](std::uint64_t set) {
        for (bool grew = true; grew;) {
            grew = false;
            for (unsigned a = 0; a < n; ++a)
                for (unsigned b = 0; b < n; ++b)
                    if ((set >> a & 1) && (set >> b & 1) && !(set >> (a ^ b) & 1)) {
                        set |= std::uint64_t{1} << (a ^ b);
                        grew = true;
                    }
        }
        return set;
    };
    std::vector<std::uint64_t> all{1};  // member bitmasks over the 2^d vectors
    for (std::size_t i = 0; i < all.size(); ++i)
        for (unsigned v = 1; v < n; ++v) {
            const auto t = close(all[i] | std::uint64_t{1} << v);
            if (std::find(all.begin(), all.end(), t) == all.end()) all.push_back(t);
        }
    const auto k = all.size();
    std::vector<std::pair<Elem, Elem>> pairs;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j && (all[i] & ~all[j]) == 0) pairs.emplace_back(static_cast<Elem>(i), static_cast<Elem>(j));
    auto L = qfw::FiniteLattice::from_pairs(k, pairs);
    std::vector<std::string> labels;
    std::vector<std::uint64_t> values;
    for (auto s : all) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(s));
        labels.emplace_back(buf);
        values.push_back(static_cast<std::uint64_t>(__builtin_popcountll(s)));
    }
    L.set_labels(std::move(labels));
    L.set_values(std::move(values));
    return L;
}

std::optional<qfw::FiniteLattice> random_lattice(std::size_t n, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution edge(density);
    std::vector<std::pair<Elem, Elem>> pairs;
    for (Elem i = 1; i + 1 < n; ++i) {
        pairs.emplace_back(0, i);
        pairs.emplace_back(i, static_cast<Elem>(n - 1));
        for (Elem j = i + 1; j + 1 < n; ++j)
            if (edge(rng)) pairs.emplace_back(i, j);
    }
    if (n >= 2) pairs.emplace_back(0, static_cast<Elem>(n - 1));
    try {
        return qfw::FiniteLattice::from_pairs(n, pairs);
    } catch (const qfw::Error&) {
        return std::nullopt;
    }
}

std::vector<Small> ChainDims::points(Small d) const {
    std::vector<Small> out;
    for (int j = 0; j <= d.j; ++j) {
        const int top = j == d.j ? d.m : window_;
        for (int m = 0; m <= top; ++m) out.push_back({j, m});
    }
    return out;
}

Small ChainDims::minus(Small a, Small b) {
    if (a.j > b.j) return {a.j - b.j, a.m};
    return {0, a.m - b.m};
}

int ChainDims::krull(Small d) {
    if (d == Small{}) return -1;
    // descending chains of the reversed chain are ascending ordinal sequences;
    // an infinite one with infinitely many nontrivial steps converges to a limit
    for (int beta = 0;; ++beta) {
        bool ok = true;
        for (int lj = 1; lj <= d.j && ok; ++lj) {
            // bad steps cofinal below w*lj: from every start c some step [x,y] there has K >= beta
            bool cofinal = true;
            for (int c = 0; c < window_ && cofinal; ++c) {
                bool found = false;
                for (int x = c; x <= window_ && !found; ++x)
                    for (int y = x + 1; y <= window_ && !found; ++y)
                        found = krull(minus({lj - 1, y}, {lj - 1, x})) >= beta;
                cofinal = found;
            }
            ok = !cofinal;
        }
        if (ok) return beta;
    }
}

bool ChainDims::simple(Small e, int beta) {
    if (e == Small{}) return false;
    // reversed [0,e]: the bottom is e, the top is 0; x runs over the elements other than the bottom
    for (const auto& x : points(e)) {
        if (x == e) continue;
        if (gabriel(minus(e, x)) <= beta) return false;  // [0_L, x] has type e - x
        if (gabriel(x) > beta) return false;              // [x, 1_L] has type x
    }
    return true;
}

int ChainDims::gabriel(Small d) {
    const std::pair<int, int> key{d.j, d.m};
    if (auto it = gdim_.find(key); it != gdim_.end()) return it->second;
    if (auto it = in_progress_.find(key); it != in_progress_.end()) return it->second;  // lower bound
    if (d == Small{}) return gdim_[key] = 0;
    for (int sigma = 1; sigma < 8; ++sigma) {
        in_progress_[key] = sigma;
        bool ok = true;
        for (const auto& a : points(d)) {
            if (a == Small{}) continue;  // a = 1_L
            bool found = false;
            for (const auto& b : points(a)) {
                if (b == a) continue;
                const auto e = minus(a, b);
                for (int beta = 0; beta < sigma && !found; ++beta) found = simple(e, beta);
                if (found) break;
            }
            if (!found) {
                ok = false;
                break;
            }
        }
        if (ok) {
            in_progress_.erase(key);
            return gdim_[key] = sigma;
        }
    }
    in_progress_.erase(key);
    return gdim_[key] = 1000;  // no value found below the search bound
}

}  // namespace oracle
