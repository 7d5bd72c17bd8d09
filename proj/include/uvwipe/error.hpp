#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace uvwipe {

enum class ErrorKind {
    parse,
    invalid_argument,
    non_manifold,
    degenerate_face,
    inconsistent_winding,
    no_boundary,
    multiple_boundaries,
    non_simple_boundary,
    disconnected_selection,
    empty_selection,
    singular_system,
    out_of_chart,
    inside_hole,
    episode_done,
    diverged,
    shape_mismatch,
    missing_artifact,
    lineage_mismatch,
    io,
};

std::string_view to_string(ErrorKind kind);

// All library failures surface as this exception; `kind` is stable and is
// what the CLI reports in its machine-readable error output.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace uvwipe
