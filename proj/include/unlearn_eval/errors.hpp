#pragma once

#include <stdexcept>
#include <string>

namespace uleval {

// Unreadable/unwritable files, missing paths.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structurally broken records: malformed JSON lines, missing required
// fields, format violations. Messages name the line and field involved.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every judge request failed; nothing was scored.
struct NetworkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace uleval
