#pragma once

#include <stdexcept>
#include <string>

namespace twistxxz {

enum class ErrorKind {
    invalid_argument,
    capacity,
    degenerate_anisotropy,
    singular_configuration,
    singular_matrix,
    precondition,
    non_physical,
    degeneracy_resolution,
    inconsistent_zero_set,
    consistency,
    io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace twistxxz
