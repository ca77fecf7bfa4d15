#pragma once

#include <complex>
#include <vector>

#include "tfden/signal.hpp"

namespace tfden {

/// Real, symmetric analysis window with unit discrete L2 norm.
struct Window {
    std::vector<double> coefficients;
    double sigma = 0.0;  // standard deviation in samples
};

enum class TfrKind { ComplexStft, Spectrogram, WignerVille, Image };

/// Dense time-frequency matrix. Rows are frequency bins (row 0 = DC), columns
/// are time frames. Real kinds use `values`; ComplexStft uses `cvalues`.
/// Both buffers are row-major.
struct Tfr {
    TfrKind kind = TfrKind::Spectrogram;
    int rows = 0;  // frequency bins
    int cols = 0;  // time frames
    double dt = 0.0;  // seconds per frame
    double df = 0.0;  // Hz per bin
    // Affine map recorded by normalize_to_image: image = (raw - offset) * scale.
    double norm_scale = 1.0;
    double norm_offset = 0.0;
    std::vector<double> values;
    std::vector<std::complex<double>> cvalues;

    double& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
    std::size_t size() const { return static_cast<std::size_t>(rows) * cols; }
    double cell_area() const { return dt * df; }
};

const char* tfr_kind_name(TfrKind kind);

/// Gaussian window w[k] ~ exp(-(k-c)^2 / (2 sigma^2)) around the center sample
/// c = (length-1)/2, scaled to unit L2 norm. Length must be odd.
Window gaussian_window(double sigma_samples, int length);

/// Short-time Fourier transform. Column m is the n_fft-point DFT of the
/// windowed segment centered at sample m*hop (zero-padded outside the signal
/// support). Only the n_fft/2 + 1 nonnegative-frequency bins are stored, so
/// rows = n_fft/2 + 1 and cols = ceil(n_samples / hop). Axes: dt = hop/fs,
/// df = fs/n_fft.
Tfr stft(const Signal& signal, const Window& window, int hop, int n_fft);

/// Element-wise squared magnitude of a complex STFT.
Tfr spectrogram(const Tfr& stft_out);

/// Affine map of [min, max] onto [0, Q]. The applied scale/offset are recorded
/// on the result so the map can be inverted.
Tfr normalize_to_image(const Tfr& s, int q_levels);

/// Inverse of the affine map recorded by normalize_to_image.
Tfr denormalize_image(const Tfr& image);

/// Discrete pseudo Wigner-Ville distribution.
///
/// The real input is replaced by its analytic signal z (one-sided spectrum),
/// which is interpolated onto a 2x grid so half-sample lags become integer
/// indices: the lag kernel at time sample n is z2[2n+p] * conj(z2[2n-p]) for
/// |p| <= max_lag, transformed over p with an FFT of length 2*(max_lag+1).
/// One column per signal sample (dt = 1/fs); bin spacing df = fs / (2*(max_lag+1)),
/// so matching an STFT grid amounts to choosing n_fft = 2*(max_lag+1) and hop 1.
/// The transform of the Hermitian lag kernel is real; the imaginary residue is
/// checked against 1e-9 (relative to the largest magnitude) and discarded.
Tfr pseudo_wigner_ville(const Signal& signal, int max_lag);

/// Separable 2-D Gaussian convolution with unit-sum kernels, truncated at
/// 4 sigma, with symmetric (half-sample) boundary reflection. Sigmas are given
/// in physical units and converted through the grid axes.
Tfr gaussian_smooth_tfr(const Tfr& w, double sigma_t_seconds, double sigma_f_hz);

/// Analytic signal via the one-sided FFT spectrum; exposed because the
/// Wigner-Ville tests check its sampling identities directly.
std::vector<std::complex<double>> analytic_signal(const std::vector<double>& x);

namespace detail {
/// In-place separable Gaussian smoothing in pixel units (rows then cols).
void smooth_pixels(std::vector<double>& values, int rows, int cols,
                   double sigma_row_pix, double sigma_col_pix);
}  // namespace detail

}  // namespace tfden
