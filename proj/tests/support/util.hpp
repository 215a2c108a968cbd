#pragma once

#include "qfw/error.hpp"

#include <functional>
#include <string>

// Error code thrown by f, or "" when f returns normally.
inline std::string code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const qfw::Error& e) {
        return e.code();
    }
    return "";
}
