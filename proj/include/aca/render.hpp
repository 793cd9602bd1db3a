#pragma once

#include <array>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "aca/types.hpp"

namespace aca {

inline constexpr std::string_view default_palette = ".#*+xo=%@&";

// One text row per time step, one glyph per site.
inline std::string render_grid(const std::vector<Configuration>& frames,
                               std::string_view palette = default_palette) {
    std::ostringstream os;
    for (const Configuration& f : frames) {
        for (const State s : f.cells) {
            if (s < 0 || s >= static_cast<int>(palette.size()))
                throw error("state " + std::to_string(s) + " exceeds the palette (" +
                            std::to_string(palette.size()) + " glyphs)");
            os << palette[static_cast<std::size_t>(s)];
        }
        os << '\n';
    }
    return os.str();
}

// Plain-text portable pixmap (P3), one pixel per cell.
inline std::string render_ppm(const std::vector<Configuration>& frames) {
    static constexpr std::array<std::array<int, 3>, 16> colors{{{0, 0, 0},
                                                                {255, 255, 255},
                                                                {228, 26, 28},
                                                                {55, 126, 184},
                                                                {77, 175, 74},
                                                                {152, 78, 163},
                                                                {255, 127, 0},
                                                                {255, 255, 51},
                                                                {166, 86, 40},
                                                                {247, 129, 191},
                                                                {153, 153, 153},
                                                                {102, 194, 165},
                                                                {252, 141, 98},
                                                                {141, 160, 203},
                                                                {231, 138, 195},
                                                                {166, 216, 84}}};
    if (frames.empty()) throw error("nothing to render");
    std::ostringstream os;
    os << "P3\n" << frames.front().width() << ' ' << frames.size() << "\n255\n";
    for (const Configuration& f : frames) {
        for (const State s : f.cells) {
            if (s < 0 || s >= static_cast<int>(colors.size()))
                throw error("state " + std::to_string(s) + " exceeds the pixmap color table");
            const auto& c = colors[static_cast<std::size_t>(s)];
            os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
        }
    }
    return os.str();
}

} // namespace aca
