#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

namespace sftlab {

struct OverlappingVolumes : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownSymbol : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SearchBudgetExceeded : std::runtime_error {
    std::uint64_t nodes;
    explicit SearchBudgetExceeded(std::uint64_t n)
        : std::runtime_error("search budget exceeded after " + std::to_string(n) + " nodes"),
          nodes(n) {}
};

struct StateBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AlphabetBudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotCommensurable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptySupport : std::runtime_error {
    using std::runtime_error::runtime_error;
    EmptySupport() : std::runtime_error("empty support") {}
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LoopNotClosed : std::runtime_error {
    using std::runtime_error::runtime_error;
    LoopNotClosed() : std::runtime_error("loop is not closed") {}
};

struct InteriorClipped : std::runtime_error {
    using std::runtime_error::runtime_error;
    InteriorClipped() : std::runtime_error("loop interior leaves the patch volume") {}
};

struct InconsistentPath : std::runtime_error {
    using std::runtime_error::runtime_error;
    InconsistentPath() : std::runtime_error("inconsistent arrow path") {}
};

struct UnclassifiableNeighborhood : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BadPatchFormat : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Global search-node budget, overridable via the SFTLAB_BUDGET env var.
std::uint64_t default_search_budget();

}  // namespace sftlab
