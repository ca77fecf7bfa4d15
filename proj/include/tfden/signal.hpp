#pragma once

#include <cstdint>
#include <vector>

namespace tfden {

/// Uniformly sampled real-valued 1-D signal.
struct Signal {
    std::vector<double> samples;
    double sample_rate = 0.0;  // Hz

    double duration() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

/// Discrete L2 norm, sqrt(sum of squares).
double l2_norm(const std::vector<double>& x);

/// Synthetic test signal: two pure tones (500, 700 Hz) plus two chirps
/// (quadratic and cubic phase), scaled to unit discrete L2 norm.
Signal gen_tone_chirp_mix(double duration_s, double fs);

/// Raw i.i.d. uniform [-1, 1] draws from a seeded generator, before any
/// normalization. Bitwise deterministic for a given seed: the mapping from
/// mt19937_64 output to [0, 1) is done by hand rather than through
/// std::uniform_real_distribution, whose algorithm is implementation-defined.
std::vector<double> uniform_noise_raw(std::size_t n_samples, std::uint64_t seed);

/// Uniform noise scaled to unit discrete L2 norm. sample_rate is left for the
/// caller to assign when mixing; defaults to 1 Hz.
Signal gen_uniform_noise(std::size_t n_samples, std::uint64_t seed, double fs = 1.0);

/// clean + g * noise, with g chosen so 20*log10(|clean| / |g*noise|) = snr_db.
Signal mix_at_snr(const Signal& clean, const Signal& noise, double snr_db);

/// Zero-phase FIR bandpass (windowed sinc, Hamming, forward-backward) followed
/// by integer-factor decimation to the largest rate <= target_fs that divides
/// the input rate evenly.
Signal bandpass_downsample(const Signal& signal, double f_lo, double f_hi,
                           double target_fs);

}  // namespace tfden
