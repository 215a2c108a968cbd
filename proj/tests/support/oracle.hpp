#pragma once

// Slow, independent evaluators used to freeze expected values in tests.

#include "qfw/lattice.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// Non-modular iff some a < c and b satisfy a v b = c v b and a ^ b = c ^ b.
bool modular_by_pentagon(const qfw::FiniteLattice& L);

// Number of prime factors of n counted with multiplicity.
std::size_t big_omega(std::uint64_t n);

// Number of k-dimensional subspaces of F_q^n.
std::uint64_t gaussian_binomial(unsigned n, unsigned k, std::uint64_t q);

// Subspaces of F_2^d as sets of vectors (d <= 6), ordered by inclusion.
// Labels are the member bitmasks in hex.
qfw::FiniteLattice subspace_lattice_f2(unsigned d);

// Random finite lattice with at most n elements, or nullopt when the random
// order is not a lattice.
std::optional<qfw::FiniteLattice> random_lattice(std::size_t n, double density, std::mt19937_64& rng);

// Ordinal w*j + m.
struct Small {
    int j = 0;
    int m = 0;
    auto operator<=>(const Small&) const = default;
};

// Krull and Gabriel dimension of the reversed chain [0, d], evaluated from
// the transfinite definitions with finite offset windows; -1 for trivial.
class ChainDims {
public:
    explicit ChainDims(int window = 6) : window_(window) {}
    int krull(Small d);
    int gabriel(Small d);

private:
    std::vector<Small> points(Small d) const;  // sampled ordinals in [0, d]
    static Small minus(Small a, Small b);      // b + (a - b) = a, requires b <= a
    bool simple(Small e, int beta);
    int window_;
    std::map<std::pair<int, int>, int> gdim_;
    std::map<std::pair<int, int>, int> in_progress_;
};

}  // namespace oracle
