#pragma once

#include <stdexcept>
#include <string>

namespace qcsched {

// Error categories map 1:1 onto CLI exit codes (1, 2, 3).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qcsched
