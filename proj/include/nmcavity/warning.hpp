// warning.hpp — Non-fatal diagnostics (negative rate integrals, positivity drift)

#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace nmcavity {

using WarningHandler = std::function<void(const std::string&)>;

namespace detail {

inline std::mutex& warning_mutex() {
    static std::mutex m;
    return m;
}

inline WarningHandler& warning_handler() {
    static WarningHandler handler = [](const std::string& msg) {
        std::cerr << "warning: " << msg << '\n';
    };
    return handler;
}

} // namespace detail

/// Replaces the process-wide warning sink; returns the previous one.
inline WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(detail::warning_mutex());
    return std::exchange(detail::warning_handler(), std::move(handler));
}

inline void warn(const std::string& msg) {
    std::lock_guard lock(detail::warning_mutex());
    if (detail::warning_handler()) detail::warning_handler()(msg);
}

} // namespace nmcavity
