#ifndef BERGLAB_ERRORS_HPP
#define BERGLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace berglab {

// Potential leaves the Kahler cone: 1 + lap(phi) <= 0 somewhere.
class kahler_cone_error : public std::runtime_error {
public:
    explicit kahler_cone_error(const std::string& what) : std::runtime_error(what) {}
};

// Profiles sampled on different grids were combined.
class grid_mismatch_error : public std::runtime_error {
public:
    explicit grid_mismatch_error(const std::string& what) : std::runtime_error(what) {}
};

// Least-squares extraction failed (too few powers, near-collinear columns).
class fit_error : public std::runtime_error {
public:
    explicit fit_error(const std::string& what) : std::runtime_error(what) {}
};

// An operation was called outside its contract (kernel component in the
// Lichnerowicz right-hand side, non-constant lift where a constant one is
// required, ...).
class precondition_error : public std::invalid_argument {
public:
    explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

// The hypothesis of a consistency check is violated by the supplied data.
class hypothesis_error : public precondition_error {
public:
    explicit hypothesis_error(const std::string& what) : precondition_error(what) {}
};

// Run configuration could not be parsed or validated.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace berglab

#endif
