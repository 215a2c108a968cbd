#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qfw {

// Every failure carries a stable code ("NotALattice", "CrossViolation", ...)
// plus an integer witness that callers can serialize.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& detail, std::vector<std::int64_t> witness = {})
        : std::runtime_error(code + ": " + detail), code_(std::move(code)), witness_(std::move(witness)) {}

    const std::string& code() const noexcept { return code_; }
    const std::vector<std::int64_t>& witness() const noexcept { return witness_; }

private:
    std::string code_;
    std::vector<std::int64_t> witness_;
};

struct Caps {
    std::size_t lattice_elements = std::size_t{1} << 16;  // enumerated element sets
    std::size_t table_elements = 4096;                    // explicit join/meet tables
    std::size_t module_order = std::size_t{1} << 16;
    std::size_t ring_order = 1024;
    std::size_t matrix_k = 2;
};

inline const Caps& default_caps() {
    static const Caps caps{};
    return caps;
}

}  // namespace qfw
