#pragma once

#include <cstddef>
#include <vector>

#include "tfden/tfr.hpp"

namespace tfden {

/// Integer-level image with entries in {0, ..., q_levels}.
struct QuantizedSpectrogram {
    std::vector<int> levels;  // row-major, rows x cols
    int q_levels = 0;
    int rows = 0;
    int cols = 0;
    double dt = 0.0;
    double df = 0.0;

    int at(int r, int c) const { return levels[static_cast<std::size_t>(r) * cols + c]; }
};

/// Partition of the pixel grid by quantized level: members[k] lists the flat
/// pixel indices of level set k, counts[k] their number.
struct LevelIndex {
    std::vector<std::vector<int>> members;
    std::vector<std::size_t> counts;
    std::size_t total = 0;
};

/// Nearest-integer quantization with the half-open rule [k-1/2, k+1/2); the
/// top half-interval [Q-1/2, Q] closes at Q. Values must lie in [0, Q].
QuantizedSpectrogram quantize(const Tfr& image, int q_levels);

/// Single pass over pixels grouping them by level.
LevelIndex build_level_index(const QuantizedSpectrogram& qs);

}  // namespace tfden
