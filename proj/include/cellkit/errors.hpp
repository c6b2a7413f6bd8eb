#pragma once

#include <stdexcept>
#include <string>

namespace cellkit {

// Base class for everything thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input: malformed words, ranks out of range, broken files.
// The CLI maps these to exit code 1.
struct user_error : error {
    using error::error;
};

// A file or string that does not match its declared format.
struct parse_error : user_error {
    using user_error::user_error;
};

// A file whose declared rank differs from the expected one.
struct rank_mismatch_error : user_error {
    using user_error::user_error;
};

// A loaded structure violating one of its documented invariants.
struct invariant_error : user_error {
    using user_error::user_error;
};

// A mathematical consistency check failed; this signals a bug (or
// inconsistent seed data) rather than bad usage. CLI exit code 2.
struct internal_error : error {
    using error::error;
};

} // namespace cellkit
