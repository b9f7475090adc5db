#pragma once

#include <stdexcept>
#include <string>

namespace blb {

// Thrown for malformed inputs: invalid representations, out-of-domain
// parameters, unparseable files.  The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what)
        : std::invalid_argument(what) {}
};

}  // namespace blb
