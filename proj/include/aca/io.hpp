#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "aca/marching.hpp"
#include "aca/rule.hpp"
#include "aca/trajectory.hpp"

namespace aca {

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

inline bool parse_int(const std::string& tok, int& out) {
    if (tok.empty()) return false;
    std::size_t i = tok[0] == '-' ? 1 : 0;
    if (i == tok.size()) return false;
    for (; i < tok.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(tok[i]))) return false;
    try {
        out = std::stoi(tok);
    } catch (...) {
        return false;
    }
    return true;
}

inline std::string strip_comment(std::string line) {
    if (const auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    return line;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    out << content;
}

} // namespace detail

inline std::string to_string(const BoundaryMode& b) {
    switch (b.kind) {
    case BoundaryKind::free_half_line:
        return b.q == 0 ? "free" : "free:" + std::to_string(b.q);
    case BoundaryKind::background:
        return "background:" + std::to_string(b.q);
    case BoundaryKind::cyclic:
        return "cyclic";
    }
    return "?";
}

inline BoundaryMode parse_boundary(const std::string& tok) {
    std::string kind = tok;
    int q = 0;
    if (const auto pos = tok.find(':'); pos != std::string::npos) {
        kind = tok.substr(0, pos);
        if (!detail::parse_int(tok.substr(pos + 1), q)) throw error("bad boundary parameter in '" + tok + "'");
    }
    if (kind == "free") return BoundaryMode::free_half_line(q);
    if (kind == "background") return BoundaryMode::background(q);
    if (kind == "cyclic") return BoundaryMode::cyclic();
    throw error("unknown boundary '" + tok + "' (expected free | background:q | cyclic)");
}

// ---------------------------------------------------------------------------
// Rule files. Line oriented; '#' starts a comment. Header lines:
//     states = n
//     boundary = free | free:q | background:q | cyclic
//     type = marching            (optional: the tables describe the base rule
//                                 and the file denotes its marching embedding)
// Body lines:
//     g: a b c -> d
//     g0: a b -> c
//     default: identity          (unlisted tuples keep the center state)
// ---------------------------------------------------------------------------

// A rule file after parsing but before totality/range validation. Unset
// entries are -1.
struct ParsedRule {
    int states = -1;
    BoundaryMode boundary = BoundaryMode::background();
    bool is_marching = false;
    bool default_identity = false;
    std::vector<State> g;
    std::vector<State> g0;

    ValidationReport validate() const {
        ValidationReport rep;
        if (states < 1) {
            rep.fail("missing or invalid 'states' header");
            return rep;
        }
        const int n = states;
        for (State l = 0; l < n; ++l)
            for (State c = 0; c < n; ++c)
                for (State r = 0; r < n; ++r) {
                    const State v = g[(static_cast<std::size_t>(l) * n + c) * n + r];
                    if (v == -1 && !default_identity)
                        rep.fail("g(" + std::to_string(l) + "," + std::to_string(c) + "," +
                                 std::to_string(r) + ") is not defined");
                    else if (v != -1 && (v < 0 || v >= n))
                        rep.fail("g(" + std::to_string(l) + "," + std::to_string(c) + "," +
                                 std::to_string(r) + ") = " + std::to_string(v) + " is out of range");
                }
        for (State c = 0; c < n; ++c)
            for (State r = 0; r < n; ++r) {
                const State v = g0[static_cast<std::size_t>(c) * n + r];
                if (v == -1 && !default_identity)
                    rep.fail("g0(" + std::to_string(c) + "," + std::to_string(r) + ") is not defined");
                else if (v != -1 && (v < 0 || v >= n))
                    rep.fail("g0(" + std::to_string(c) + "," + std::to_string(r) + ") = " +
                             std::to_string(v) + " is out of range");
            }
        if (boundary.kind != BoundaryKind::cyclic && (boundary.q < 0 || boundary.q >= n))
            rep.fail("boundary fill state " + std::to_string(boundary.q) + " is out of range");
        return rep;
    }

    RuleTable1D to_rule() const {
        const ValidationReport rep = validate();
        if (!rep.valid) throw error("invalid rule: " + rep.summary());
        const int n = states;
        std::vector<State> t3 = g;
        std::vector<State> t2 = g0;
        for (State l = 0; l < n; ++l)
            for (State c = 0; c < n; ++c)
                for (State r = 0; r < n; ++r) {
                    auto& v = t3[(static_cast<std::size_t>(l) * n + c) * n + r];
                    if (v == -1) v = c;
                }
        for (State c = 0; c < n; ++c)
            for (State r = 0; r < n; ++r) {
                auto& v = t2[static_cast<std::size_t>(c) * n + r];
                if (v == -1) v = c;
            }
        return RuleTable1D{StateSpace{n}, std::move(t3), std::move(t2), boundary};
    }
};

inline ParsedRule parse_rule_text(std::string_view text, const std::string& filename = "<string>") {
    ParsedRule pr;
    std::vector<bool> seen_g, seen_g0;
    int lineno = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::strip_comment(raw);
        const auto toks = detail::split_ws(line);
        if (toks.empty()) continue;

        auto need_states = [&]() {
            if (pr.states < 1)
                throw parse_error(filename, lineno, "'states = n' must come before rule entries");
        };

        if (toks[0] == "states") {
            if (toks.size() != 3 || toks[1] != "=" || !detail::parse_int(toks[2], pr.states) ||
                pr.states < 1)
                throw parse_error(filename, lineno, "expected 'states = n' with n >= 1");
            pr.g.assign(static_cast<std::size_t>(pr.states) * pr.states * pr.states, -1);
            pr.g0.assign(static_cast<std::size_t>(pr.states) * pr.states, -1);
            seen_g.assign(pr.g.size(), false);
            seen_g0.assign(pr.g0.size(), false);
        } else if (toks[0] == "boundary") {
            if (toks.size() != 3 || toks[1] != "=")
                throw parse_error(filename, lineno, "expected 'boundary = <mode>'");
            try {
                pr.boundary = parse_boundary(toks[2]);
            } catch (const error& e) {
                throw parse_error(filename, lineno, e.what());
            }
        } else if (toks[0] == "type") {
            if (toks.size() != 3 || toks[1] != "=" || toks[2] != "marching")
                throw parse_error(filename, lineno, "the only supported type is 'marching'");
            pr.is_marching = true;
        } else if (toks[0] == "default:") {
            if (toks.size() != 2 || toks[1] != "identity")
                throw parse_error(filename, lineno, "expected 'default: identity'");
            pr.default_identity = true;
        } else if (toks[0] == "g:") {
            need_states();
            int a, b, c, d;
            if (toks.size() != 6 || toks[4] != "->" || !detail::parse_int(toks[1], a) ||
                !detail::parse_int(toks[2], b) || !detail::parse_int(toks[3], c) ||
                !detail::parse_int(toks[5], d))
                throw parse_error(filename, lineno, "expected 'g: a b c -> d'");
            if (a < 0 || a >= pr.states || b < 0 || b >= pr.states || c < 0 || c >= pr.states)
                throw parse_error(filename, lineno, "g tuple state out of range");
            const std::size_t idx = (static_cast<std::size_t>(a) * pr.states + b) * pr.states + c;
            if (seen_g[idx]) throw parse_error(filename, lineno, "duplicate g entry");
            seen_g[idx] = true;
            pr.g[idx] = d;
        } else if (toks[0] == "g0:") {
            need_states();
            int a, b, c;
            if (toks.size() != 5 || toks[3] != "->" || !detail::parse_int(toks[1], a) ||
                !detail::parse_int(toks[2], b) || !detail::parse_int(toks[4], c))
                throw parse_error(filename, lineno, "expected 'g0: a b -> c'");
            if (a < 0 || a >= pr.states || b < 0 || b >= pr.states)
                throw parse_error(filename, lineno, "g0 tuple state out of range");
            const std::size_t idx = static_cast<std::size_t>(a) * pr.states + b;
            if (seen_g0[idx]) throw parse_error(filename, lineno, "duplicate g0 entry");
            seen_g0[idx] = true;
            pr.g0[idx] = c;
        } else {
            throw parse_error(filename, lineno, "unrecognized directive '" + toks[0] + "'");
        }
    }
    if (pr.states < 1) throw parse_error(filename, lineno, "missing 'states = n' header");
    return pr;
}

inline ParsedRule load_rule_file(const std::string& path) {
    return parse_rule_text(detail::read_file(path), path);
}

inline std::string rule_to_text(const RuleTable1D& rule, bool marching = false) {
    std::ostringstream os;
    const int n = rule.states().size;
    os << "# aca-rule v1\n";
    os << "states = " << n << '\n';
    os << "boundary = " << to_string(rule.boundary()) << '\n';
    if (marching) os << "type = marching\n";
    for (State l = 0; l < n; ++l)
        for (State c = 0; c < n; ++c)
            for (State r = 0; r < n; ++r)
                os << "g: " << l << ' ' << c << ' ' << r << " -> " << rule.g(l, c, r) << '\n';
    for (State c = 0; c < n; ++c)
        for (State r = 0; r < n; ++r) os << "g0: " << c << ' ' << r << " -> " << rule.g0(c, r) << '\n';
    return os.str();
}

// A rule file resolved into either the plain table or its marching embedding.
struct LoadedRule {
    std::variant<RuleTable1D, MarchingRule> rule;

    bool is_marching() const { return std::holds_alternative<MarchingRule>(rule); }
    const RuleTable1D& base() const {
        if (is_marching()) return std::get<MarchingRule>(rule).base();
        return std::get<RuleTable1D>(rule);
    }
    StateSpace states() const {
        if (is_marching()) return std::get<MarchingRule>(rule).states();
        return std::get<RuleTable1D>(rule).states();
    }
    BoundaryMode boundary() const {
        if (is_marching()) return std::get<MarchingRule>(rule).boundary();
        return std::get<RuleTable1D>(rule).boundary();
    }
};

inline LoadedRule load_rule(const std::string& path) {
    const ParsedRule pr = load_rule_file(path);
    RuleTable1D rule = pr.to_rule();
    if (pr.is_marching) return LoadedRule{MarchingRule{std::move(rule)}};
    return LoadedRule{std::move(rule)};
}

// ---------------------------------------------------------------------------
// Schedule files: one line per step, whitespace-separated absolute site
// indices; '*' means every window site, '-' (or an empty set line) means an
// idle step. '#' comments and blank lines are skipped.
// ---------------------------------------------------------------------------

inline Schedule parse_schedule_text(std::string_view text, const Configuration& window,
                                    const std::string& filename = "<string>") {
    std::vector<std::vector<int>> sets;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = detail::strip_comment(raw);
        const auto toks = detail::split_ws(line);
        if (toks.empty()) continue;
        std::vector<int> set;
        if (toks.size() == 1 && toks[0] == "*") {
            for (int x = window.origin; x < window.end(); ++x) set.push_back(x);
        } else if (toks.size() == 1 && toks[0] == "-") {
            // idle step
        } else {
            for (const auto& tok : toks) {
                int x;
                if (!detail::parse_int(tok, x))
                    throw parse_error(filename, lineno, "bad site index '" + tok + "'");
                if (!window.in_window(x))
                    throw parse_error(filename, lineno,
                                      "site " + std::to_string(x) + " is outside the window");
                set.push_back(x);
            }
        }
        sets.push_back(std::move(set));
    }
    return Schedule::explicit_sets(std::move(sets));
}

inline Schedule load_schedule_file(const std::string& path, const Configuration& window) {
    return parse_schedule_text(detail::read_file(path), window, path);
}

// ---------------------------------------------------------------------------
// Trace files: tab-separated (t, site, state) rows, frame 0 in full, then one
// row per changed cell. Header comments carry the window geometry.
// ---------------------------------------------------------------------------

inline std::string trace_to_tsv(const Trajectory& traj) {
    std::ostringstream os;
    const Configuration& init = traj.initial();
    os << "# aca-trace v1\n";
    os << "# origin = " << init.origin << '\n';
    os << "# width = " << init.width() << '\n';
    os << "# boundary = " << to_string(init.boundary) << '\n';
    os << "t\tsite\tstate\n";
    for (int x = init.origin; x < init.end(); ++x) os << 0 << '\t' << x << '\t' << init.get(x) << '\n';
    for (int t = 0; t < traj.horizon(); ++t)
        for (const int x : traj.updates[static_cast<std::size_t>(t)])
            os << (t + 1) << '\t' << x << '\t' << traj.state(x, t + 1) << '\n';
    return os.str();
}

struct TraceData {
    Configuration initial;
    std::vector<std::vector<std::pair<int, State>>> changes; // per step t = 1..T

    std::vector<Configuration> frames() const {
        std::vector<Configuration> out{initial};
        for (const auto& step : changes) {
            Configuration next = out.back();
            for (const auto& [x, s] : step) next.ref(x) = s;
            out.push_back(std::move(next));
        }
        return out;
    }

    // Rebuild a Trajectory (frames, update sets, ages) from the stored rows.
    Trajectory to_trajectory() const {
        Trajectory traj;
        traj.frames = frames();
        traj.ages.push_back(std::vector<int>(static_cast<std::size_t>(initial.width()), 0));
        for (const auto& step : changes) {
            std::vector<int> upd;
            for (const auto& [x, s] : step) upd.push_back(x);
            std::sort(upd.begin(), upd.end());
            std::vector<int> row = traj.ages.back();
            for (const int x : upd) ++row[static_cast<std::size_t>(x - initial.origin)];
            traj.updates.push_back(std::move(upd));
            traj.ages.push_back(std::move(row));
        }
        return traj;
    }
};

inline TraceData parse_trace_tsv(std::string_view text, const std::string& filename = "<string>") {
    TraceData data;
    data.initial.boundary = BoundaryMode::background();
    int origin = 0, width = -1;
    bool have_origin = false;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    std::vector<std::pair<int, std::pair<int, State>>> rows; // (t, (site, state))
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw[0] == '#') {
            const auto toks = detail::split_ws(raw.substr(1));
            if (toks.size() == 3 && toks[1] == "=") {
                if (toks[0] == "origin") {
                    if (!detail::parse_int(toks[2], origin))
                        throw parse_error(filename, lineno, "bad origin");
                    have_origin = true;
                } else if (toks[0] == "width") {
                    if (!detail::parse_int(toks[2], width) || width < 0)
                        throw parse_error(filename, lineno, "bad width");
                } else if (toks[0] == "boundary") {
                    try {
                        data.initial.boundary = parse_boundary(toks[2]);
                    } catch (const error& e) {
                        throw parse_error(filename, lineno, e.what());
                    }
                }
            }
            continue;
        }
        const auto toks = detail::split_ws(raw);
        if (toks.empty()) continue;
        if (toks[0] == "t") continue; // column header
        int t, site, state;
        if (toks.size() != 3 || !detail::parse_int(toks[0], t) || !detail::parse_int(toks[1], site) ||
            !detail::parse_int(toks[2], state))
            throw parse_error(filename, lineno, "expected 't site state'");
        if (t < 0) throw parse_error(filename, lineno, "negative time");
        rows.push_back({t, {site, state}});
    }
    if (rows.empty()) throw parse_error(filename, 1, "trace has no rows");

    int max_t = 0;
    for (const auto& [t, _] : rows) max_t = std::max(max_t, t);
    std::vector<std::pair<int, State>> frame0;
    for (const auto& [t, cell] : rows)
        if (t == 0) frame0.push_back(cell);
    if (frame0.empty()) throw parse_error(filename, 1, "trace is missing frame 0");
    if (!have_origin) {
        origin = frame0.front().first;
        for (const auto& [x, s] : frame0) origin = std::min(origin, x);
    }
    if (width < 0) {
        int end = origin;
        for (const auto& [x, s] : frame0) end = std::max(end, x + 1);
        width = end - origin;
    }
    data.initial.origin = origin;
    data.initial.cells.assign(static_cast<std::size_t>(width), 0);
    std::vector<bool> seen(static_cast<std::size_t>(width), false);
    for (const auto& [x, s] : frame0) {
        if (x < origin || x >= origin + width)
            throw parse_error(filename, 1, "frame 0 site " + std::to_string(x) + " outside window");
        data.initial.cells[static_cast<std::size_t>(x - origin)] = s;
        seen[static_cast<std::size_t>(x - origin)] = true;
    }
    for (int i = 0; i < width; ++i)
        if (!seen[static_cast<std::size_t>(i)])
            throw parse_error(filename, 1,
                              "frame 0 is incomplete at site " + std::to_string(origin + i));
    data.changes.assign(static_cast<std::size_t>(max_t), {});
    for (const auto& [t, cell] : rows) {
        if (t == 0) continue;
        if (cell.first < origin || cell.first >= origin + width)
            throw parse_error(filename, 1, "site " + std::to_string(cell.first) + " outside window");
        data.changes[static_cast<std::size_t>(t - 1)].push_back(cell);
    }
    return data;
}

// ---------------------------------------------------------------------------
// Reconstruction output: three small TSVs.
// ---------------------------------------------------------------------------

inline std::string delta_to_tsv(const ReconstructionResult& res) {
    std::ostringstream os;
    os << "# aca-delta v1\nsite\tdelta\n";
    for (int i = 0; i < res.width(); ++i)
        os << (res.origin + i) << '\t' << res.delta[static_cast<std::size_t>(i)] << '\n';
    return os.str();
}

inline std::string taubar_to_tsv(const ReconstructionResult& res) {
    std::ostringstream os;
    os << "# aca-taubar v1\nt\tsite\ttaubar\n";
    for (std::size_t t = 0; t < res.tau_bar.size(); ++t)
        for (int i = 0; i < res.width(); ++i)
            os << t << '\t' << (res.origin + i) << '\t' << res.tau_bar[t][static_cast<std::size_t>(i)]
               << '\n';
    return os.str();
}

inline std::string etabar_to_tsv(const ReconstructionResult& res) {
    std::ostringstream os;
    os << "# aca-etabar v1\nsite\tu\tstate\n";
    for (const auto& line : res.eta_bar)
        for (std::size_t k = 0; k < line.values.size(); ++k)
            os << line.site << '\t' << (line.u_min + static_cast<int>(k)) << '\t' << line.values[k]
               << '\n';
    return os.str();
}

// ---------------------------------------------------------------------------
// Initial configurations: either a compact digit string ("00100"), a
// comma-separated list ("0,11,3"), or a file of whitespace-separated states
// with optional '# origin = o' header.
// ---------------------------------------------------------------------------

inline std::vector<State> parse_states_string(const std::string& text) {
    std::vector<State> cells;
    if (text.find(',') != std::string::npos) {
        std::string cur;
        std::istringstream ss(text);
        while (std::getline(ss, cur, ',')) {
            int v;
            if (!detail::parse_int(cur, v)) throw error("bad state '" + cur + "' in initial configuration");
            cells.push_back(v);
        }
    } else {
        for (char ch : text) {
            if (!std::isdigit(static_cast<unsigned char>(ch)))
                throw error(std::string("bad state character '") + ch + "' in initial configuration");
            cells.push_back(ch - '0');
        }
    }
    return cells;
}

inline Configuration parse_config_file(std::string_view text, const std::string& filename = "<string>") {
    Configuration cfg;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (!raw.empty() && raw[0] == '#') {
            const auto toks = detail::split_ws(raw.substr(1));
            if (toks.size() == 3 && toks[1] == "=") {
                if (toks[0] == "origin" && !detail::parse_int(toks[2], cfg.origin))
                    throw parse_error(filename, lineno, "bad origin");
                if (toks[0] == "boundary") cfg.boundary = parse_boundary(toks[2]);
            }
            continue;
        }
        for (const auto& tok : detail::split_ws(raw)) {
            int v;
            if (!detail::parse_int(tok, v)) throw parse_error(filename, lineno, "bad state '" + tok + "'");
            cfg.cells.push_back(v);
        }
    }
    if (cfg.cells.empty()) throw parse_error(filename, lineno, "configuration file has no states");
    return cfg;
}

} // namespace aca
