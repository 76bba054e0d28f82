#pragma once

#include <stdexcept>
#include <string>

namespace hamlab {

// A point left the open unit disk (or got too close to the boundary).
struct range_error : std::runtime_error {
    explicit range_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative procedure (domain normalization, flow lift) exceeded its cap.
struct divergence_error : std::runtime_error {
    explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

// A level-set operation was requested at a non-regular point of H.
struct regularity_error : std::runtime_error {
    explicit regularity_error(const std::string& what) : std::runtime_error(what) {}
};

// A level curve failed to close up within the time cap.
struct nonclosure_error : std::runtime_error {
    explicit nonclosure_error(const std::string& what) : std::runtime_error(what) {}
};

// Bad user-facing configuration.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hamlab
