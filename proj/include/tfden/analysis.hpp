#pragma once

#include <optional>
#include <vector>

#include "tfden/tfr.hpp"

namespace tfden {

struct IfPoint {
    double t = 0.0;         // seconds
    int component = 0;      // ordinal within the frame, 0-based
    double freq_hz = 0.0;   // frequency gravity center
    double intensity = 0.0; // mean gray level over the component
};

struct IfTrack {
    std::vector<IfPoint> points;
    double beta = 0.0;   // threshold actually used
    double i_min = 0.0;
};

struct EnergyProfile {
    std::vector<double> t;
    std::vector<double> energy;

    int argmax() const;
};

/// Frobenius-norm ratio |clean - filtered| / |clean|.
double relative_mse(const Tfr& s_clean, const Tfr& s_filtered);

/// Per-column IF candidates: threshold the image at beta (auto = image mean),
/// take maximal runs of consecutive frequency bins above zero, and reduce each
/// run to its frequency gravity center and mean intensity. Points with mean
/// intensity below i_min are dropped.
IfTrack extract_if_lines(const Tfr& image, std::optional<double> beta,
                         double i_min);

/// Frequency-integrated energy per frame: E(t_m) = sum_n S(n, m) * df.
EnergyProfile energy_profile(const Tfr& image);

/// Removes the most energetic filtered components from the original:
/// output(x) = 0 where sn(x) > alpha, else s0(x).
Tfr spectral_subtract(const Tfr& s0, const Tfr& sn, double alpha);

}  // namespace tfden
