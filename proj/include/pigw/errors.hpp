#pragma once

#include <stdexcept>
#include <string>

namespace pigw {

// Malformed file contents (bad magic, wrong version).
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Well-formed file whose contents violate a data invariant.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct ArgumentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A training run that produced a non-finite loss.
struct RunError : std::runtime_error {
    RunError(int run, const std::string& what)
        : std::runtime_error("run " + std::to_string(run) + ": " + what), run_index(run) {}
    int run_index;
};

} // namespace pigw
