#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aca/commutativity.hpp"
#include "aca/history.hpp"
#include "aca/rule.hpp"
#include "aca/trajectory.hpp"

namespace aca {

// Centered residue: the integer congruent to b mod m lying in (-m/2, m/2].
inline int amod(long long b, int m) {
    if (m < 1) throw error("amod modulus must be positive");
    long long r = b % m;
    if (r < 0) r += m;
    if (2 * r > m) r -= m;
    return static_cast<int>(r);
}

// Composite cell of the order-robust embedding: the base state being
// computed, the base state one step earlier, and a step counter mod 3.
struct MarchingState {
    State cur = 0;
    State prev = 0;
    int age = 0;
    friend bool operator==(const MarchingState&, const MarchingState&) = default;
};

inline State encode_marching(const MarchingState& m, int base_states) {
    return (m.cur * base_states + m.prev) * 3 + m.age;
}

inline MarchingState decode_marching(State s, int base_states) {
    MarchingState m;
    m.age = s % 3;
    s /= 3;
    m.prev = s % base_states;
    m.cur = s / base_states;
    return m;
}

// Optional reduction of the Prev field: when the base rule reads its
// neighbors only through a smaller message (say, one bit of the state), it is
// enough to remember the previous message instead of the whole previous
// state. `project` maps a base state to its message in {0, ..., count-1}; the
// base tables must factor through it on both neighbor arguments, which the
// embedding validates exhaustively at construction.
struct MessageField {
    int count = 0;
    std::vector<State> project; // indexed by base state
};

// The "marching soldiers" embedding of a 1-D base rule. A cell refuses to
// step while any neighbor lags behind it (counter comparison via amod 3);
// otherwise it computes the base rule on each neighbor's Cur field if that
// neighbor has the same counter, Prev if the neighbor is one step ahead,
// stores its own Cur into Prev and advances the counter. Neighbors stay
// within one step of each other, which makes the update order irrelevant.
//
// The composite is not a plain lookup table: a frozen window edge must not
// make its neighbor lag forever, so edge cells simply drop the missing
// neighbor (its base contribution is baked in via the base rule's edge
// forms). Composite configurations should carry the base boundary kind with
// fill 0; the fill value itself is never read.
class MarchingRule {
public:
    explicit MarchingRule(RuleTable1D base) : base_(std::move(base)) {
        const int n = base_.states().size;
        msg_.count = n;
        msg_.project.resize(static_cast<std::size_t>(n));
        rep_.resize(static_cast<std::size_t>(n));
        for (State s = 0; s < n; ++s) {
            msg_.project[static_cast<std::size_t>(s)] = s;
            rep_[static_cast<std::size_t>(s)] = s;
        }
    }

    MarchingRule(RuleTable1D base, MessageField msg) : base_(std::move(base)), msg_(std::move(msg)) {
        const int n = base_.states().size;
        if (static_cast<int>(msg_.project.size()) != n)
            throw error("message projection must cover the base state space");
        if (msg_.count < 1) throw error("message field needs at least one value");
        rep_.assign(static_cast<std::size_t>(msg_.count), -1);
        for (State s = 0; s < n; ++s) {
            const State m = msg_.project[static_cast<std::size_t>(s)];
            if (m < 0 || m >= msg_.count) throw error("message projection out of range");
            if (rep_[static_cast<std::size_t>(m)] == -1) rep_[static_cast<std::size_t>(m)] = s;
        }
        for (State m = 0; m < msg_.count; ++m)
            if (rep_[static_cast<std::size_t>(m)] == -1)
                throw error("message value " + std::to_string(m) + " is never produced");
        // the base tables must not distinguish neighbor states with equal messages
        for (State a = 0; a < n; ++a)
            for (State b = 0; b < n; ++b) {
                if (msg_.project[static_cast<std::size_t>(a)] != msg_.project[static_cast<std::size_t>(b)])
                    continue;
                for (State c = 0; c < n; ++c)
                    for (State d = 0; d < n; ++d) {
                        if (base_.g(a, c, d) != base_.g(b, c, d) || base_.g(d, c, a) != base_.g(d, c, b))
                            throw error("base rule does not factor through the message field");
                    }
                for (State c = 0; c < n; ++c)
                    if (base_.g0(c, a) != base_.g0(c, b))
                        throw error("base edge rule does not factor through the message field");
            }
    }

    const RuleTable1D& base() const { return base_; }
    int prev_count() const { return msg_.count; }
    bool full_prev() const { return msg_.count == base_.states().size; }
    StateSpace states() const { return StateSpace{3 * base_.states().size * msg_.count}; }
    BoundaryMode boundary() const { return BoundaryMode{base_.boundary().kind, 0}; }

    State encode(const MarchingState& m) const {
        return (m.cur * msg_.count + m.prev) * 3 + m.age;
    }
    MarchingState decode(State s) const {
        MarchingState m;
        m.age = s % 3;
        s /= 3;
        m.prev = s % msg_.count;
        m.cur = s / msg_.count;
        return m;
    }

    // Composite transition on decoded cells; prev fields hold messages (equal
    // to whole states under the default full-state embedding).
    MarchingState step(std::optional<MarchingState> left, MarchingState c,
                       std::optional<MarchingState> right) const {
        if (left && amod(left->age - c.age, 3) < 0) return c;
        if (right && amod(right->age - c.age, 3) < 0) return c;
        const auto sigma = [&](const MarchingState& nb) {
            // the base rule only sees a representative with the right message
            if (nb.age == c.age) return nb.cur;
            return rep_[static_cast<std::size_t>(nb.prev)];
        };
        State next;
        if (left && right)
            next = base_.g(sigma(*left), c.cur, sigma(*right));
        else if (!left && right)
            next = base_.left_edge(c.cur, sigma(*right));
        else if (left && !right)
            next = base_.right_edge(sigma(*left), c.cur);
        else if (base_.boundary().kind == BoundaryKind::free_half_line)
            next = base_.g0(c.cur, base_.boundary().q);
        else
            next = base_.g(base_.boundary().q, c.cur, base_.boundary().q);
        return MarchingState{next, msg_.project[static_cast<std::size_t>(c.cur)], (c.age + 1) % 3};
    }

    State interior(State l, State c, State r) const {
        return encode(step(decode(l), decode(c), decode(r)));
    }
    State left_edge(State c, State r) const {
        return encode(step(std::nullopt, decode(c), decode(r)));
    }
    State right_edge(State l, State c) const {
        return encode(step(decode(l), decode(c), std::nullopt));
    }

    State eval(const Configuration& cfg, int x) const {
        const MarchingState c = decode(cfg.get(x));
        std::optional<MarchingState> l;
        std::optional<MarchingState> r;
        if (base_.boundary().kind == BoundaryKind::cyclic) {
            l = decode(*cfg.read(x - 1));
            r = decode(*cfg.read(x + 1));
        } else {
            if (cfg.in_window(x - 1)) l = decode(cfg.get(x - 1));
            if (cfg.in_window(x + 1)) r = decode(cfg.get(x + 1));
        }
        return encode(step(l, c, r));
    }

private:
    RuleTable1D base_;
    MessageField msg_;
    std::vector<State> rep_; // one base state per message value
};

inline MarchingRule marching_transform(RuleTable1D base) { return MarchingRule{std::move(base)}; }

// Start every cell at (base state, 0, 0).
inline Configuration lift_config(const MarchingRule& rule, const Configuration& base_cfg) {
    Configuration cfg;
    cfg.origin = base_cfg.origin;
    cfg.boundary = rule.boundary();
    cfg.cells.reserve(base_cfg.cells.size());
    for (const State s : base_cfg.cells) {
        if (!rule.base().states().contains(s)) throw error("base state out of range in lift");
        cfg.cells.push_back(rule.encode(MarchingState{s, 0, 0}));
    }
    return cfg;
}

enum class MarchingTupleSet { age_reachable, all };

// Local commutativity of the composite. The default enumeration skips
// interior tuples whose middle pair could never be jointly free (unequal
// counters, or an outer neighbor lagging); `all` audits the full tuple space.
inline std::optional<ViolationWitness> check_marching_commutativity(
    const MarchingRule& rule, MarchingTupleSet set = MarchingTupleSet::age_reachable) {
    if (set == MarchingTupleSet::all) return check_local_commutativity(rule);
    return check_local_commutativity(rule, [](State r0, State r1, State r2, State r3) {
        const int a0 = r0 % 3, a1 = r1 % 3, a2 = r2 % 3, a3 = r3 % 3;
        return a1 == a2 && amod(a0 - a1, 3) >= 0 && amod(a3 - a2, 3) >= 0;
    });
}

// Project the Cur field of a synchronous run from a lifted start. The result
// rows satisfy the base rule's synchronous step exactly, and every cell of
// the composite changes at every step.
inline std::vector<std::vector<State>> project_cur(const MarchingRule& rule, const Trajectory& traj) {
    for (const State s : traj.initial().cells) {
        const MarchingState m = rule.decode(s);
        if (m.prev != 0 || m.age != 0)
            throw error("project_cur expects a lifted initial configuration");
    }
    for (int t = 0; t < traj.horizon(); ++t) {
        const Configuration& cur = traj.frames[static_cast<std::size_t>(t)];
        const Configuration& next = traj.frames[static_cast<std::size_t>(t) + 1];
        for (int x = cur.origin; x < cur.end(); ++x)
            if (next.get(x) != rule.eval(cur, x))
                throw error("trajectory is not synchronous; use reconstruct_1d for asynchronous runs");
    }
    std::vector<std::vector<State>> rows;
    rows.reserve(traj.frames.size());
    for (const Configuration& f : traj.frames) {
        std::vector<State> row;
        row.reserve(f.cells.size());
        for (const State s : f.cells) row.push_back(rule.decode(s).cur);
        rows.push_back(std::move(row));
    }
    return rows;
}

// For cyclic windows: do the counter increments around the loop cancel?
// Inconsistent loops stall (every cell ends up waiting on a neighbor).
inline bool marching_age_loop_consistent(const MarchingRule& rule, const Configuration& cfg) {
    if (cfg.boundary.kind != BoundaryKind::cyclic) return true;
    const int w = cfg.width();
    long long sum = 0;
    for (int i = 0; i < w; ++i) {
        const int a = rule.decode(cfg.cells[static_cast<std::size_t>(i)]).age;
        const int b = rule.decode(cfg.cells[static_cast<std::size_t>((i + 1) % w)]).age;
        sum += amod(b - a, 3);
    }
    return sum == 0;
}

// The base-layer run recovered from an arbitrary (possibly asynchronous)
// trajectory of the composite. delta aligns each site's private step counter
// on a common virtual time axis; eta holds the recovered base states,
// defined for u in [delta(x)-1, delta(x)+tau(x,T)] per site (the u =
// delta(x)-1 value is the seed read from the initial Prev field).
struct ReconstructionResult {
    int origin = 0;
    BoundaryKind boundary = BoundaryKind::background;
    std::vector<int> delta;                // per local site
    std::vector<std::vector<int>> tau_bar; // [t][i] = tau + delta

    struct SiteLine {
        int site = 0;
        int u_min = 0; // = delta - 1; values[0] is the seed
        std::vector<State> values;
    };
    std::vector<SiteLine> eta_bar;

    int width() const { return static_cast<int>(delta.size()); }
    std::optional<State> eta(int x, int u) const {
        const int i = x - origin;
        if (i < 0 || i >= width()) return std::nullopt;
        const auto& line = eta_bar[static_cast<std::size_t>(i)];
        const int k = u - line.u_min;
        if (k < 0 || k >= static_cast<int>(line.values.size())) return std::nullopt;
        return line.values[static_cast<std::size_t>(k)];
    }
    bool is_seed_point(int x, int u) const {
        const int i = x - origin;
        return i >= 0 && i < width() && u == delta[static_cast<std::size_t>(i)] - 1;
    }
};

// Alignment offsets from the initial counters: delta(0) = 0 and
// delta(x+1) - delta(x) = the centered residue of the neighbors' counter
// difference. (Counters live mod 3, so the raw difference is meaningful only
// through amod; on runs started from a lifted configuration all offsets are
// zero either way.) Cyclic windows are refused when the increments around
// the loop do not cancel.
inline ReconstructionResult reconstruct_1d(const MarchingRule& rule, const Trajectory& traj) {
    if (!rule.full_prev())
        throw error("reconstruction needs the full-state Prev variant of the embedding");
    const Configuration& init = traj.initial();
    const int w = init.width();
    if (w < 1) throw error("reconstruction needs a nonempty window");

    ReconstructionResult res;
    res.origin = init.origin;
    res.boundary = rule.boundary().kind;
    res.delta.resize(static_cast<std::size_t>(w), 0);
    auto age0 = [&](int i) { return rule.decode(init.cells[static_cast<std::size_t>(i)]).age; };
    for (int i = 0; i + 1 < w; ++i)
        res.delta[static_cast<std::size_t>(i) + 1] =
            res.delta[static_cast<std::size_t>(i)] + amod(age0(i + 1) - age0(i), 3);
    if (res.boundary == BoundaryKind::cyclic) {
        long long loop = 0;
        for (int i = 0; i < w; ++i) loop += amod(age0((i + 1) % w) - age0(i), 3);
        if (loop != 0)
            throw error("cyclic window has an inconsistent counter loop (sum " + std::to_string(loop) +
                        " != 0); reconstruction refused");
    }

    res.tau_bar.reserve(traj.ages.size());
    for (const auto& row : traj.ages) {
        std::vector<int> shifted(row.size());
        for (std::size_t i = 0; i < row.size(); ++i)
            shifted[i] = row[i] + res.delta[i];
        res.tau_bar.push_back(std::move(shifted));
    }

    for (int i = 0; i < w; ++i) {
        const int x = init.origin + i;
        const SiteHistory zeta = extract_history(traj, x);
        ReconstructionResult::SiteLine line;
        line.site = x;
        line.u_min = res.delta[static_cast<std::size_t>(i)] - 1;
        line.values.reserve(zeta.values.size() + 1);
        line.values.push_back(rule.decode(init.cells[static_cast<std::size_t>(i)]).prev);
        for (const State s : zeta.values) line.values.push_back(rule.decode(s).cur);
        res.eta_bar.push_back(std::move(line));
    }
    return res;
}

struct ReconstructionFailure {
    int site = 0;
    int u = 0;
    std::string what;
    std::string describe() const {
        return "reconstruction fails at site " + std::to_string(site) + ", u=" + std::to_string(u) +
               ": " + what;
    }
};

// Check the recovered run against the base rule: wherever a site performed
// its k-th effective update, the recovered state at virtual time u+1 must be
// the base transition of the recovered states at u (edge forms at the window
// edges). Every referenced term must be defined.
inline std::optional<ReconstructionFailure> verify_reconstruction(const ReconstructionResult& res,
                                                                  const RuleTable1D& base) {
    const int w = res.width();
    const bool cyclic = res.boundary == BoundaryKind::cyclic;
    for (int i = 0; i < w; ++i) {
        const int x = res.origin + i;
        const auto& line = res.eta_bar[static_cast<std::size_t>(i)];
        const int k_max = static_cast<int>(line.values.size()) - 2; // tau(x, T)
        for (int k = 1; k <= k_max; ++k) {
            const int u = res.delta[static_cast<std::size_t>(i)] + k - 1;
            const State got = *res.eta(x, u + 1);
            const State c = *res.eta(x, u);
            std::optional<State> l;
            std::optional<State> r;
            bool has_left = true;
            bool has_right = true;
            if (cyclic) {
                l = res.eta(res.origin + (i - 1 + w) % w, u);
                r = res.eta(res.origin + (i + 1) % w, u);
            } else {
                has_left = i > 0;
                has_right = i < w - 1;
                if (has_left) l = res.eta(x - 1, u);
                if (has_right) r = res.eta(x + 1, u);
            }
            if (has_left && !l)
                return ReconstructionFailure{x, u + 1, "left term undefined"};
            if (has_right && !r)
                return ReconstructionFailure{x, u + 1, "right term undefined"};

            State expect;
            if (has_left && has_right)
                expect = base.g(*l, c, *r);
            else if (!has_left && has_right)
                expect = base.left_edge(c, *r);
            else if (has_left && !has_right)
                expect = base.right_edge(*l, c);
            else if (base.boundary().kind == BoundaryKind::free_half_line)
                expect = base.g0(c, base.boundary().q);
            else
                expect = base.g(base.boundary().q, c, base.boundary().q);

            if (expect != got)
                return ReconstructionFailure{x, u + 1,
                                             "expected " + std::to_string(expect) + ", recovered " +
                                                 std::to_string(got)};
        }
    }
    return std::nullopt;
}

} // namespace aca
