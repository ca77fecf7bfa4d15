#include "tfden/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tfden {

int EnergyProfile::argmax() const {
    if (energy.empty()) return -1;
    return static_cast<int>(std::max_element(energy.begin(), energy.end()) -
                            energy.begin());
}

double relative_mse(const Tfr& s_clean, const Tfr& s_filtered) {
    if (s_clean.rows != s_filtered.rows || s_clean.cols != s_filtered.cols)
        throw std::invalid_argument("relative_mse: shape mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < s_clean.values.size(); ++i) {
        const double d = s_clean.values[i] - s_filtered.values[i];
        num += d * d;
        den += s_clean.values[i] * s_clean.values[i];
    }
    if (den == 0.0) throw std::invalid_argument("relative_mse: zero-norm clean image");
    return std::sqrt(num / den);
}

IfTrack extract_if_lines(const Tfr& image, std::optional<double> beta,
                         double i_min) {
    if (image.kind != TfrKind::Image)
        throw std::invalid_argument("extract_if_lines: input kind must be image");

    double b;
    if (beta.has_value()) {
        b = *beta;
    } else {
        double sum = 0.0;
        for (double v : image.values) sum += v;
        b = sum / static_cast<double>(image.values.size());
    }

    IfTrack track;
    track.beta = b;
    track.i_min = i_min;

    for (int c = 0; c < image.cols; ++c) {
        int component = 0;
        int r = 0;
        while (r < image.rows) {
            if (image.at(r, c) < b) {
                ++r;
                continue;
            }
            // Maximal run of bins at or above the threshold.
            double wsum = 0.0, fsum = 0.0, isum = 0.0;
            int len = 0;
            while (r < image.rows && image.at(r, c) >= b) {
                const double v = image.at(r, c);
                wsum += v;
                fsum += v * (r * image.df);
                isum += v;
                ++len;
                ++r;
            }
            const double intensity = isum / len;
            if (intensity >= i_min && wsum > 0.0) {
                IfPoint p;
                p.t = c * image.dt;
                p.component = component++;
                p.freq_hz = fsum / wsum;
                p.intensity = intensity;
                track.points.push_back(p);
            }
        }
    }
    return track;
}

EnergyProfile energy_profile(const Tfr& image) {
    if (image.kind != TfrKind::Image)
        throw std::invalid_argument("energy_profile: input kind must be image");
    EnergyProfile prof;
    prof.t.resize(image.cols);
    prof.energy.resize(image.cols);
    for (int c = 0; c < image.cols; ++c) {
        double acc = 0.0;
        for (int r = 0; r < image.rows; ++r) acc += image.at(r, c);
        prof.t[c] = c * image.dt;
        prof.energy[c] = acc * image.df;
    }
    return prof;
}

Tfr spectral_subtract(const Tfr& s0, const Tfr& sn, double alpha) {
    if (s0.rows != sn.rows || s0.cols != sn.cols)
        throw std::invalid_argument("spectral_subtract: shape mismatch");
    Tfr out = s0;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = sn.values[i] > alpha ? 0.0 : s0.values[i];
    return out;
}

}  // namespace tfden
