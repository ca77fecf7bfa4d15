#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfden/filters.hpp"
#include "tfden/signal.hpp"
#include "tfden/tfr.hpp"

namespace tfden {

struct StftParams {
    double window_sigma = 96.0;  // samples
    int window_len = 769;        // odd; covers +-4 sigma
    int hop = 4;
    int nfft = 1022;             // 512 nonnegative-frequency bins
};

struct InputConfig {
    std::string type = "synthetic";  // "synthetic" | "wav"
    std::string path;
    double duration_s = 1.024;
    double fs = 8000.0;
    std::uint64_t seed = 7;
    double snr_db = 0.0;
};

/// Aggregated run configuration; serializable to/from JSON with these exact
/// field names (see experiments.cpp).
struct RunConfig {
    InputConfig input;
    StftParams stft;
    FilterParams filter;
    double alpha = 1.0;     // spectral subtraction threshold
    double beta = -1.0;     // IF threshold; negative = auto (image mean)
    double i_min = 25.5;    // IF intensity threshold
    std::string out_dir = "out";
    std::vector<std::string> filters = {"nf"};
};

RunConfig run_config_from_json_file(const std::string& path);
std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text);

/// The tone-and-chirp component of the synthetic test signal.
Signal experiment1_clean_signal(const InputConfig& in);

/// Clean plus unit-norm uniform noise mixed at the configured SNR.
Signal experiment1_noisy_signal(const InputConfig& in);

/// signal -> STFT -> spectrogram -> [0, Q] image.
Tfr pipeline_image(const Signal& signal, const StftParams& p, int q_levels);

/// Surrogate for the arrhythmia recording: a persistent tone line, a strong
/// band-limited noise bump whose energy peak sits outside the burst window,
/// and a weak broadband burst centered at burst_center_s.
struct BurstSurrogate {
    Signal signal;
    double burst_center_s = 0.0;
    double burst_half_width_s = 0.0;
};
BurstSurrogate make_burst_line_surrogate(double fs, double duration_s,
                                         std::uint64_t seed);

struct DenoiseRun {
    std::string filter;  // "nf" | "yaroslavsky" | "tv"
    FilterResult result;
    double mse = -1.0;   // vs clean reference; negative when unavailable
};

/// Runs one named filter on an image, timing the core only.
DenoiseRun run_filter(const std::string& name, const Tfr& image,
                      const FilterParams& params);

}  // namespace tfden
