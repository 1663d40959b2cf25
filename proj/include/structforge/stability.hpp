#pragma once

// Static support-graph stability check.
//
// This is a conservative heuristic, not a physics simulation: a block is
// floating when no chain of face contacts connects it to the ground, and
// unbalanced when its center lies outside the horizontal span of the
// contacts that carry it. Pigs neither support nor need support.

#include "structforge/level.hpp"

#include <optional>
#include <string>
#include <vector>

namespace structforge {

inline constexpr double kContactEpsilon = 0.02;
inline constexpr double kMinContactOverlap = 0.01;
inline constexpr double kBalanceMargin = 0.01;

struct SupportContact {
    std::optional<std::size_t> supporter;  // nullopt = ground
    std::size_t supported;
    double x0;
    double x1;

    bool from_ground() const { return !supporter.has_value(); }
    friend bool operator==(const SupportContact&, const SupportContact&) = default;
};

struct StabilityReport {
    bool stable = true;
    std::vector<std::size_t> floating_blocks;
    std::vector<std::size_t> unbalanced_blocks;
    std::vector<SupportContact> support_edges;
};

std::vector<SupportContact> build_support_graph(const Structure& structure);

StabilityReport check_stability(const Structure& structure);

// Human-readable lines.
std::string format_report_text(const std::string& name, const StabilityReport& report);
// One key=value record per line, prefixed by "name".
std::string format_report_records(const std::string& name, const StabilityReport& report);

}  // namespace structforge
