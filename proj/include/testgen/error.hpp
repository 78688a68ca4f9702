#pragma once

#include <stdexcept>
#include <string>

namespace testgen {

// Root of all library errors; subcommands map subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace testgen
