#include "structforge/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace structforge {

std::vector<SupportContact> build_support_graph(const Structure& structure) {
    const auto& blocks = structure.blocks;
    std::vector<SupportContact> edges;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const Block& upper = blocks[i];
        if (std::abs(upper.bottom()) <= kContactEpsilon) {
            edges.push_back({std::nullopt, i, upper.left(), upper.right()});
        }
        for (std::size_t j = 0; j < blocks.size(); ++j) {
            if (i == j) continue;
            const Block& lower = blocks[j];
            if (std::abs(lower.top() - upper.bottom()) > kContactEpsilon) continue;
            if (lower.cy >= upper.cy) continue;
            const double x0 = std::max(lower.left(), upper.left());
            const double x1 = std::min(lower.right(), upper.right());
            if (x1 - x0 >= kMinContactOverlap) edges.push_back({j, i, x0, x1});
        }
    }
    return edges;
}

StabilityReport check_stability(const Structure& structure) {
    const auto& blocks = structure.blocks;
    StabilityReport report;
    report.support_edges = build_support_graph(structure);

    std::vector<std::vector<std::size_t>> carries(blocks.size());
    std::vector<double> span_lo(blocks.size(), std::numeric_limits<double>::infinity());
    std::vector<double> span_hi(blocks.size(), -std::numeric_limits<double>::infinity());
    std::vector<std::size_t> frontier;
    std::vector<bool> grounded(blocks.size(), false);
    for (const auto& e : report.support_edges) {
        span_lo[e.supported] = std::min(span_lo[e.supported], e.x0);
        span_hi[e.supported] = std::max(span_hi[e.supported], e.x1);
        if (e.from_ground()) {
            if (!grounded[e.supported]) frontier.push_back(e.supported);
            grounded[e.supported] = true;
        } else {
            carries[*e.supporter].push_back(e.supported);
        }
    }
    while (!frontier.empty()) {
        const auto b = frontier.back();
        frontier.pop_back();
        for (auto up : carries[b]) {
            if (!grounded[up]) {
                grounded[up] = true;
                frontier.push_back(up);
            }
        }
    }

    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (!grounded[i]) {
            report.floating_blocks.push_back(i);
            continue;
        }
        // Balance against the convex span of the supporting contacts, so a
        // plank resting on two posts counts as carried.
        const double cx = blocks[i].cx;
        if (cx < span_lo[i] - kBalanceMargin || cx > span_hi[i] + kBalanceMargin) report.unbalanced_blocks.push_back(i);
    }
    report.stable = report.floating_blocks.empty() && report.unbalanced_blocks.empty();
    return report;
}

namespace {

std::string join(const std::vector<std::size_t>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(ids[i]);
    }
    return out;
}

}  // namespace

std::string format_report_text(const std::string& name, const StabilityReport& report) {
    std::ostringstream out;
    out << name << ": " << (report.stable ? "stable" : "UNSTABLE") << " (" << report.support_edges.size()
        << " contacts)\n";
    for (auto id : report.floating_blocks) out << "  block " << id << ": floating, no support path to ground\n";
    for (auto id : report.unbalanced_blocks) out << "  block " << id << ": center outside its support span\n";
    return out.str();
}

std::string format_report_records(const std::string& name, const StabilityReport& report) {
    std::ostringstream out;
    out << "file=" << name << " stable=" << (report.stable ? 1 : 0) << " contacts=" << report.support_edges.size()
        << " floating=" << join(report.floating_blocks) << " unbalanced=" << join(report.unbalanced_blocks) << "\n";
    return out.str();
}

}  // namespace structforge
