#pragma once

#include <string>

#include "tfden/analysis.hpp"
#include "tfden/tfr.hpp"

namespace tfden {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Binary PGM (P5, maxval 255). Values are rounded and clamped to [0, 255];
/// rows are written top-down with the highest frequency first.
void write_pgm(const Tfr& image, const std::string& path);

/// Row-major CSV with a commented header carrying kind, shape and axes.
void write_matrix_csv(const Tfr& tfr, const std::string& path);

/// Columns t, n, freq_hz, intensity.
void write_iftrack_csv(const IfTrack& track, const std::string& path);

/// Columns t, energy.
void write_profile_csv(const EnergyProfile& profile, const std::string& path);

}  // namespace tfden
