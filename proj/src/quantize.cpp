#include "tfden/quantize.hpp"

#include <cmath>
#include <stdexcept>

namespace tfden {

QuantizedSpectrogram quantize(const Tfr& image, int q_levels) {
    if (image.kind != TfrKind::Image)
        throw std::invalid_argument("quantize: input kind must be image");
    if (q_levels <= 0) throw std::invalid_argument("quantize: Q must be positive");

    QuantizedSpectrogram out;
    out.q_levels = q_levels;
    out.rows = image.rows;
    out.cols = image.cols;
    out.dt = image.dt;
    out.df = image.df;
    out.levels.resize(image.values.size());
    for (std::size_t i = 0; i < image.values.size(); ++i) {
        const double v = image.values[i];
        if (v < 0.0 || v > q_levels)
            throw std::invalid_argument("quantize: value outside [0, Q]");
        // [k - 1/2, k + 1/2); the top half-interval closes at Q.
        int k = static_cast<int>(std::floor(v + 0.5));
        if (k > q_levels) k = q_levels;
        out.levels[i] = k;
    }
    return out;
}

LevelIndex build_level_index(const QuantizedSpectrogram& qs) {
    LevelIndex index;
    index.members.resize(qs.q_levels + 1);
    index.counts.assign(qs.q_levels + 1, 0);
    index.total = qs.levels.size();
    for (std::size_t i = 0; i < qs.levels.size(); ++i)
        index.members[qs.levels[i]].push_back(static_cast<int>(i));
    for (std::size_t k = 0; k < index.members.size(); ++k)
        index.counts[k] = index.members[k].size();
    return index;
}

}  // namespace tfden
