#pragma once
// Error taxonomy shared across the library. cap_error marks size/budget cap
// violations (CLI maps these to a dedicated exit code); invalid_argument and
// domain_error keep their usual meanings for malformed inputs.

#include <stdexcept>

namespace dppac {

struct cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dppac
