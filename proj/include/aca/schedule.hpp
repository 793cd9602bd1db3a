#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <variant>
#include <vector>

#include "aca/types.hpp"

namespace aca {

// A schedule produces the set of sites *attempted* at each step; the engine
// realizes the subset that actually changes state. All site indices are
// absolute (window coordinates).
struct Schedule {
    struct Synchronous {};
    struct Bernoulli {
        double p = 0.5;
        std::uint64_t seed = 0;
    };
    struct RoundRobin {
        int per_step = 1;
    };
    struct Explicit {
        std::vector<std::vector<int>> sets;
    };

    std::variant<Synchronous, Bernoulli, RoundRobin, Explicit> policy = Synchronous{};

    static Schedule synchronous() { return {}; }
    static Schedule bernoulli(double p, std::uint64_t seed) {
        if (p < 0.0 || p > 1.0) throw error("Bernoulli probability must lie in [0,1]");
        return {Bernoulli{p, seed}};
    }
    static Schedule round_robin(int per_step) {
        if (per_step < 1) throw error("round-robin step size must be positive");
        return {RoundRobin{per_step}};
    }
    static Schedule explicit_sets(std::vector<std::vector<int>> sets) {
        return {Explicit{std::move(sets)}};
    }
};

namespace detail {

// Streams attempted sets for one simulation run. Bernoulli draws one raw
// 64-bit value per site per step (sites ascending), attempting the site when
// the draw is below floor(p * 2^64); mt19937_64 makes this reproducible
// across platforms.
class ScheduleRunner {
public:
    ScheduleRunner(const Schedule& s, int origin, int width) : origin_(origin), width_(width) {
        if (const auto* b = std::get_if<Schedule::Bernoulli>(&s.policy)) {
            rng_.seed(b->seed);
            p_ = b->p;
            mode_ = Mode::bernoulli;
        } else if (const auto* rr = std::get_if<Schedule::RoundRobin>(&s.policy)) {
            per_step_ = rr->per_step;
            mode_ = Mode::round_robin;
        } else if (const auto* ex = std::get_if<Schedule::Explicit>(&s.policy)) {
            sets_ = &ex->sets;
            mode_ = Mode::explicit_sets;
        } else {
            mode_ = Mode::synchronous;
        }
    }

    std::vector<int> next(int t) {
        std::vector<int> out;
        switch (mode_) {
        case Mode::synchronous:
            out.resize(static_cast<std::size_t>(width_));
            for (int i = 0; i < width_; ++i) out[static_cast<std::size_t>(i)] = origin_ + i;
            break;
        case Mode::bernoulli: {
            if (p_ <= 0.0) {
                break;
            }
            if (p_ >= 1.0) {
                for (int i = 0; i < width_; ++i) out.push_back(origin_ + i);
                break;
            }
            const long double scaled = static_cast<long double>(p_) * 18446744073709551616.0L;
            const std::uint64_t threshold =
                scaled >= 18446744073709551615.0L ? UINT64_MAX : static_cast<std::uint64_t>(scaled);
            for (int i = 0; i < width_; ++i)
                if (rng_() < threshold) out.push_back(origin_ + i);
            break;
        }
        case Mode::round_robin:
            for (int j = 0; j < std::min(per_step_, width_); ++j)
                out.push_back(origin_ + (cursor_ + j) % width_);
            cursor_ = width_ == 0 ? 0 : (cursor_ + per_step_) % width_;
            std::sort(out.begin(), out.end());
            break;
        case Mode::explicit_sets:
            if (t < static_cast<int>(sets_->size())) {
                out = (*sets_)[static_cast<std::size_t>(t)];
                std::sort(out.begin(), out.end());
                out.erase(std::unique(out.begin(), out.end()), out.end());
                for (int x : out)
                    if (x < origin_ || x >= origin_ + width_)
                        throw error("explicit schedule names site " + std::to_string(x) +
                                    " outside the window");
            }
            break;
        }
        return out;
    }

private:
    enum class Mode { synchronous, bernoulli, round_robin, explicit_sets };
    Mode mode_ = Mode::synchronous;
    int origin_ = 0;
    int width_ = 0;
    double p_ = 0.0;
    int per_step_ = 1;
    int cursor_ = 0;
    const std::vector<std::vector<int>>* sets_ = nullptr;
    std::mt19937_64 rng_;
};

} // namespace detail

} // namespace aca
