#include "tfden/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tfden {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double l2_norm(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc);
}

Signal gen_tone_chirp_mix(double duration_s, double fs) {
    if (duration_s <= 0.0) throw std::invalid_argument("gen_tone_chirp_mix: duration must be positive");
    if (fs <= 0.0) throw std::invalid_argument("gen_tone_chirp_mix: sample rate must be positive");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * fs));
    if (n == 0) throw std::invalid_argument("gen_tone_chirp_mix: duration too short for one sample");

    Signal out;
    out.sample_rate = fs;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        out.samples[i] = std::sin(2.0 * kPi * 500.0 * t) +
                         std::sin(2.0 * kPi * 700.0 * t) +
                         std::sin(2.0 * kPi * 1000.0 * t * t) +
                         std::sin(2.0 * kPi * 600.0 * t * t * t);
    }
    const double norm = l2_norm(out.samples);
    if (norm > 0.0) {
        for (double& v : out.samples) v /= norm;
    }
    return out;
}

std::vector<double> uniform_noise_raw(std::size_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) throw std::invalid_argument("uniform_noise_raw: need at least one sample");
    std::mt19937_64 rng(seed);
    std::vector<double> out(n_samples);
    for (double& v : out) {
        // 53 high bits -> [0, 1), then stretch to [-1, 1).
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        v = 2.0 * u - 1.0;
    }
    return out;
}

Signal gen_uniform_noise(std::size_t n_samples, std::uint64_t seed, double fs) {
    Signal out;
    out.sample_rate = fs;
    out.samples = uniform_noise_raw(n_samples, seed);
    const double norm = l2_norm(out.samples);
    for (double& v : out.samples) v /= norm;
    return out;
}

Signal mix_at_snr(const Signal& clean, const Signal& noise, double snr_db) {
    if (clean.samples.size() != noise.samples.size())
        throw std::invalid_argument("mix_at_snr: length mismatch");
    if (clean.sample_rate != noise.sample_rate)
        throw std::invalid_argument("mix_at_snr: sample rate mismatch");

    const double nc = l2_norm(clean.samples);
    const double nn = l2_norm(noise.samples);
    if (nn == 0.0) throw std::invalid_argument("mix_at_snr: zero-norm noise");

    const double g = (nc / nn) * std::pow(10.0, -snr_db / 20.0);

    Signal out;
    out.sample_rate = clean.sample_rate;
    out.samples.resize(clean.samples.size());
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] = clean.samples[i] + g * noise.samples[i];
    return out;
}

namespace {

// Symmetric windowed-sinc bandpass, Hamming window. f_lo = 0 degenerates to a
// lowpass. Taps are forced odd so the filter has an exact center.
std::vector<double> design_fir_bandpass(double f_lo, double f_hi, double fs,
                                        int n_taps) {
    if (n_taps % 2 == 0) ++n_taps;
    const int half = (n_taps - 1) / 2;
    const double w_lo = 2.0 * kPi * f_lo / fs;
    const double w_hi = 2.0 * kPi * f_hi / fs;
    std::vector<double> taps(n_taps);
    for (int i = 0; i < n_taps; ++i) {
        const int m = i - half;
        double ideal;
        if (m == 0) {
            ideal = (w_hi - w_lo) / kPi;
        } else {
            ideal = (std::sin(w_hi * m) - std::sin(w_lo * m)) / (kPi * m);
        }
        const double hamming = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (n_taps - 1));
        taps[i] = ideal * hamming;
    }
    return taps;
}

// Centered convolution with zero padding outside the signal.
std::vector<double> apply_fir_centered(const std::vector<double>& x,
                                       const std::vector<double>& taps) {
    const int half = (static_cast<int>(taps.size()) - 1) / 2;
    const int n = static_cast<int>(x.size());
    std::vector<double> y(x.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        for (int j = lo; j <= hi; ++j)
            acc += x[j] * taps[half + (i - j)];
        y[i] = acc;
    }
    return y;
}

}  // namespace

Signal bandpass_downsample(const Signal& signal, double f_lo, double f_hi,
                           double target_fs) {
    const double fs = signal.sample_rate;
    if (!(0.0 <= f_lo && f_lo < f_hi && f_hi <= target_fs / 2.0 &&
          target_fs / 2.0 <= fs / 2.0))
        throw std::invalid_argument("bandpass_downsample: band violates Nyquist constraints");
    if (signal.samples.empty())
        throw std::invalid_argument("bandpass_downsample: empty signal");

    int factor = static_cast<int>(std::floor(fs / target_fs));
    if (factor < 1) factor = 1;
    const double out_fs = fs / factor;
    if (f_hi > out_fs / 2.0)
        throw std::invalid_argument("bandpass_downsample: passband exceeds decimated Nyquist rate");

    int n_taps = 4096;
    if (f_lo > 0.0)
        n_taps = std::min(4096, static_cast<int>(std::lround(4.0 * fs / f_lo)));
    n_taps = std::max(n_taps, 9);

    const auto taps = design_fir_bandpass(f_lo, f_hi, fs, n_taps);

    // Forward-backward pass for zero phase; the symmetric FIR already has
    // linear phase, running it twice squares the magnitude response.
    auto y = apply_fir_centered(signal.samples, taps);
    std::reverse(y.begin(), y.end());
    y = apply_fir_centered(y, taps);
    std::reverse(y.begin(), y.end());

    Signal out;
    out.sample_rate = out_fs;
    out.samples.reserve(y.size() / factor + 1);
    for (std::size_t i = 0; i < y.size(); i += factor)
        out.samples.push_back(y[i]);
    return out;
}

}  // namespace tfden
