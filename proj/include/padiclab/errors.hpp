#pragma once

#include <stdexcept>
#include <string>

namespace padiclab {

// Domain errors: bad parameters, out-of-domain inputs.  CLI exit code 1.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Precision / truncation / level errors: the computation is well posed but
// cannot be resolved with the working precision, truncation order, measure
// level or coefficient ring.  CLI exit code 2.
class precision_error : public std::runtime_error {
public:
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace padiclab
