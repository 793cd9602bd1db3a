#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aca {

// Local states are small nonnegative integers.
using State = int;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by the text-format parsers; line numbers are 1-based.
struct parse_error : error {
    parse_error(std::string file_, int line_, const std::string& what_)
        : error(file_ + ":" + std::to_string(line_) + ": " + what_),
          file(std::move(file_)),
          line(line_) {}
    std::string file;
    int line;
};

// Exhaustive enumeration would exceed the configured budget.
struct budget_error : error {
    using error::error;
};

// The set of local states, represented as {0, ..., size-1}.
struct StateSpace {
    int size = 0;
    bool contains(State s) const { return s >= 0 && s < size; }
    friend bool operator==(const StateSpace&, const StateSpace&) = default;
};

enum class BoundaryKind { free_half_line, background, cyclic };

// How a finite window embeds into the infinite lattice. Sites outside the
// window never update.
//
//   free_half_line : the window is [0, W) of the half-line. Site 0 has no
//                    left neighbor (the two-argument edge table applies
//                    there); reads beyond the right edge resolve to `q`.
//   background     : reads outside the window resolve to the frozen state `q`.
//   cyclic         : indices wrap modulo the window width; `q` is unused.
struct BoundaryMode {
    BoundaryKind kind = BoundaryKind::background;
    State q = 0;

    static BoundaryMode free_half_line(State right_fill = 0) {
        return {BoundaryKind::free_half_line, right_fill};
    }
    static BoundaryMode background(State fill = 0) { return {BoundaryKind::background, fill}; }
    static BoundaryMode cyclic() { return {BoundaryKind::cyclic, 0}; }

    friend bool operator==(const BoundaryMode&, const BoundaryMode&) = default;
};

// A finite window of site states. `origin` is the absolute index of cells[0].
struct Configuration {
    int origin = 0;
    std::vector<State> cells;
    BoundaryMode boundary{};

    int width() const { return static_cast<int>(cells.size()); }
    int end() const { return origin + width(); }
    bool in_window(int x) const { return x >= origin && x < end(); }

    // Absolute in-window access.
    State get(int x) const {
        if (!in_window(x)) throw error("site " + std::to_string(x) + " is outside the window");
        return cells[static_cast<std::size_t>(x - origin)];
    }
    State& ref(int x) {
        if (!in_window(x)) throw error("site " + std::to_string(x) + " is outside the window");
        return cells[static_cast<std::size_t>(x - origin)];
    }

    // The state seen when a rule looks at absolute position x. Empty only for
    // the nonexistent left neighbor of site 0 on the free half-line.
    std::optional<State> read(int x) const {
        if (boundary.kind == BoundaryKind::cyclic) {
            const int w = width();
            if (w == 0) throw error("cyclic read on an empty window");
            int i = (x - origin) % w;
            if (i < 0) i += w;
            return cells[static_cast<std::size_t>(i)];
        }
        if (in_window(x)) return cells[static_cast<std::size_t>(x - origin)];
        if (boundary.kind == BoundaryKind::free_half_line && x < 0) return std::nullopt;
        return boundary.q;
    }

    friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Result of the validate() overloads. Objects that construct successfully
// always pass; raw parsed tables may not.
struct ValidationReport {
    bool valid = true;
    std::vector<std::string> issues;

    void fail(std::string what) {
        valid = false;
        issues.push_back(std::move(what));
    }
    std::string summary() const {
        if (valid) return "valid";
        std::string s = "invalid";
        for (const auto& i : issues) s += "\n  " + i;
        return s;
    }
};

} // namespace aca
