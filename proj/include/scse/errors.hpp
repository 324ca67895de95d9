#pragma once

#include <stdexcept>
#include <string>

namespace scse {

/// Malformed user-supplied input (config file, corpus, STS file,
/// checkpoint). The CLI maps this to exit code 2.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace scse
