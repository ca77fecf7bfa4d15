#include "tfden/tfr.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tfden {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Half-sample symmetric reflection: ..., x[1], x[0] | x[0], x[1], ...
// Folding this way keeps unit-sum kernels mass-preserving at the edges.
int reflect_index(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -1 - i;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

std::vector<double> gaussian_kernel_unit_sum(double sigma_pix) {
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_pix)));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma_pix * sigma_pix));
        k[i + radius] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

std::vector<std::complex<double>> fft_complex(const std::vector<std::complex<double>>& in,
                                              int sign) {
    const int n = static_cast<int>(in.size());
    std::vector<std::complex<double>> out(in.size());
    fftw_plan plan = fftw_plan_dft_1d(
        n,
        reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data())),
        reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

}  // namespace

const char* tfr_kind_name(TfrKind kind) {
    switch (kind) {
        case TfrKind::ComplexStft: return "complex-stft";
        case TfrKind::Spectrogram: return "spectrogram";
        case TfrKind::WignerVille: return "wigner-ville";
        case TfrKind::Image: return "image";
    }
    return "?";
}

Window gaussian_window(double sigma_samples, int length) {
    if (sigma_samples <= 0.0)
        throw std::invalid_argument("gaussian_window: sigma must be positive");
    if (length <= 0 || length % 2 == 0)
        throw std::invalid_argument("gaussian_window: length must be odd and positive");

    Window w;
    w.sigma = sigma_samples;
    w.coefficients.resize(length);
    const double c = (length - 1) / 2.0;
    double sum_sq = 0.0;
    for (int k = 0; k < length; ++k) {
        const double d = (k - c) / sigma_samples;
        w.coefficients[k] = std::exp(-0.5 * d * d);
        sum_sq += w.coefficients[k] * w.coefficients[k];
    }
    const double inv = 1.0 / std::sqrt(sum_sq);
    for (double& v : w.coefficients) v *= inv;
    return w;
}

Tfr stft(const Signal& signal, const Window& window, int hop, int n_fft) {
    const int wlen = static_cast<int>(window.coefficients.size());
    const int n = static_cast<int>(signal.samples.size());
    if (hop < 1) throw std::invalid_argument("stft: hop must be at least 1");
    if (n_fft < wlen) throw std::invalid_argument("stft: n_fft shorter than the window");
    if (n <= wlen) throw std::invalid_argument("stft: signal shorter than the window");
    if (signal.sample_rate <= 0.0) throw std::invalid_argument("stft: invalid sample rate");

    const int n_bins = n_fft / 2 + 1;
    const int n_frames = (n + hop - 1) / hop;
    const int half = (wlen - 1) / 2;

    Tfr out;
    out.kind = TfrKind::ComplexStft;
    out.rows = n_bins;
    out.cols = n_frames;
    out.dt = hop / signal.sample_rate;
    out.df = signal.sample_rate / n_fft;
    out.cvalues.resize(out.size());

    std::vector<double> buf(n_fft);
    std::vector<std::complex<double>> spec(n_bins);
    fftw_plan plan = fftw_plan_dft_r2c_1d(n_fft, buf.data(),
                                          reinterpret_cast<fftw_complex*>(spec.data()),
                                          FFTW_ESTIMATE);

    for (int m = 0; m < n_frames; ++m) {
        const int center = m * hop;
        std::fill(buf.begin(), buf.end(), 0.0);
        for (int k = 0; k < wlen; ++k) {
            const int idx = center - half + k;
            if (idx >= 0 && idx < n)
                buf[k] = signal.samples[idx] * window.coefficients[k];
        }
        fftw_execute(plan);
        for (int b = 0; b < n_bins; ++b)
            out.cvalues[static_cast<std::size_t>(b) * n_frames + m] = spec[b];
    }
    fftw_destroy_plan(plan);
    return out;
}

Tfr spectrogram(const Tfr& stft_out) {
    if (stft_out.kind != TfrKind::ComplexStft)
        throw std::invalid_argument("spectrogram: input kind must be complex-stft");

    Tfr out;
    out.kind = TfrKind::Spectrogram;
    out.rows = stft_out.rows;
    out.cols = stft_out.cols;
    out.dt = stft_out.dt;
    out.df = stft_out.df;
    out.values.resize(out.size());
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = std::norm(stft_out.cvalues[i]);
    return out;
}

Tfr normalize_to_image(const Tfr& s, int q_levels) {
    if (s.values.empty()) throw std::invalid_argument("normalize_to_image: empty input");
    if (q_levels <= 0) throw std::invalid_argument("normalize_to_image: Q must be positive");

    const auto [mn_it, mx_it] = std::minmax_element(s.values.begin(), s.values.end());
    const double mn = *mn_it, mx = *mx_it;
    if (mx <= mn)
        throw std::invalid_argument("normalize_to_image: constant-valued input has no range");

    Tfr out;
    out.kind = TfrKind::Image;
    out.rows = s.rows;
    out.cols = s.cols;
    out.dt = s.dt;
    out.df = s.df;
    out.norm_scale = q_levels / (mx - mn);
    out.norm_offset = mn;
    out.values.resize(s.values.size());
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        // The affine image of mx can land one ulp above Q; clamp to the contract.
        const double v = (s.values[i] - mn) * out.norm_scale;
        out.values[i] = std::clamp(v, 0.0, static_cast<double>(q_levels));
    }
    return out;
}

Tfr denormalize_image(const Tfr& image) {
    if (image.kind != TfrKind::Image)
        throw std::invalid_argument("denormalize_image: input kind must be image");
    Tfr out = image;
    out.kind = TfrKind::Spectrogram;
    out.norm_scale = 1.0;
    out.norm_offset = 0.0;
    for (double& v : out.values)
        v = v / image.norm_scale + image.norm_offset;
    return out;
}

std::vector<std::complex<double>> analytic_signal(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    if (n == 0) throw std::invalid_argument("analytic_signal: empty input");

    std::vector<std::complex<double>> in(x.begin(), x.end());
    auto spec = fft_complex(in, FFTW_FORWARD);

    // One-sided spectrum: keep DC (and Nyquist when n is even), double the
    // positive frequencies, zero the negative ones.
    for (int k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
    for (int k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;

    auto z = fft_complex(spec, FFTW_BACKWARD);
    for (auto& v : z) v /= n;
    return z;
}

Tfr pseudo_wigner_ville(const Signal& signal, int max_lag) {
    const int n = static_cast<int>(signal.samples.size());
    if (max_lag <= 0 || max_lag % 2 == 0)
        throw std::invalid_argument("pseudo_wigner_ville: max_lag must be odd and positive");
    if (max_lag > n)
        throw std::invalid_argument("pseudo_wigner_ville: max_lag exceeds signal length");
    if (signal.sample_rate <= 0.0)
        throw std::invalid_argument("pseudo_wigner_ville: invalid sample rate");

    // Analytic signal on a 2x grid: pad the one-sided spectrum to length 2n.
    std::vector<std::complex<double>> in(signal.samples.begin(), signal.samples.end());
    auto spec = fft_complex(in, FFTW_FORWARD);
    for (int k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
    for (int k = n / 2 + 1; k < n; ++k) spec[k] = 0.0;
    std::vector<std::complex<double>> spec2(2 * static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k <= n / 2; ++k) spec2[k] = spec[k];
    auto z2 = fft_complex(spec2, FFTW_BACKWARD);
    for (auto& v : z2) v /= n;  // 1/(2n) inverse scaling times the factor 2 interpolation gain

    const int n2 = 2 * n;
    const int nl = 2 * (max_lag + 1);
    const int n_bins = nl / 2 + 1;

    Tfr out;
    out.kind = TfrKind::WignerVille;
    out.rows = n_bins;
    out.cols = n;
    out.dt = 1.0 / signal.sample_rate;
    out.df = signal.sample_rate / nl;
    out.values.resize(out.size());

    std::vector<std::complex<double>> lag(nl);
    std::vector<std::complex<double>> col(nl);
    fftw_plan plan = fftw_plan_dft_1d(nl, reinterpret_cast<fftw_complex*>(lag.data()),
                                      reinterpret_cast<fftw_complex*>(col.data()),
                                      FFTW_FORWARD, FFTW_ESTIMATE);

    double max_abs = 0.0, max_imag = 0.0;
    for (int t = 0; t < n; ++t) {
        std::fill(lag.begin(), lag.end(), std::complex<double>(0.0, 0.0));
        for (int p = -max_lag; p <= max_lag; ++p) {
            const int ia = 2 * t + p;
            const int ib = 2 * t - p;
            if (ia < 0 || ia >= n2 || ib < 0 || ib >= n2) continue;  // zero outside support
            const std::complex<double> k = z2[ia] * std::conj(z2[ib]);
            lag[(p + nl) % nl] = k;
        }
        fftw_execute(plan);
        for (int b = 0; b < n_bins; ++b) {
            const std::complex<double> v = col[b];
            out.values[static_cast<std::size_t>(b) * n + t] = v.real();
            max_abs = std::max(max_abs, std::abs(v.real()));
            max_imag = std::max(max_imag, std::abs(v.imag()));
        }
    }
    fftw_destroy_plan(plan);

    if (max_abs > 0.0 && max_imag > 1e-9 * max_abs)
        throw std::runtime_error("pseudo_wigner_ville: unexpected imaginary residue");
    return out;
}

namespace detail {

void smooth_pixels(std::vector<double>& values, int rows, int cols,
                   double sigma_row_pix, double sigma_col_pix) {
    std::vector<double> tmp(values.size());

    if (sigma_row_pix > 0.0) {
        const auto k = gaussian_kernel_unit_sum(sigma_row_pix);
        const int radius = (static_cast<int>(k.size()) - 1) / 2;
        for (int c = 0; c < cols; ++c) {
            for (int r = 0; r < rows; ++r) {
                double acc = 0.0;
                for (int d = -radius; d <= radius; ++d)
                    acc += k[d + radius] *
                           values[static_cast<std::size_t>(reflect_index(r + d, rows)) * cols + c];
                tmp[static_cast<std::size_t>(r) * cols + c] = acc;
            }
        }
        values.swap(tmp);
    }

    if (sigma_col_pix > 0.0) {
        const auto k = gaussian_kernel_unit_sum(sigma_col_pix);
        const int radius = (static_cast<int>(k.size()) - 1) / 2;
        for (int r = 0; r < rows; ++r) {
            const double* row = &values[static_cast<std::size_t>(r) * cols];
            double* dst = &tmp[static_cast<std::size_t>(r) * cols];
            for (int c = 0; c < cols; ++c) {
                double acc = 0.0;
                for (int d = -radius; d <= radius; ++d)
                    acc += k[d + radius] * row[reflect_index(c + d, cols)];
                dst[c] = acc;
            }
        }
        values.swap(tmp);
    }
}

}  // namespace detail

Tfr gaussian_smooth_tfr(const Tfr& w, double sigma_t_seconds, double sigma_f_hz) {
    if (sigma_t_seconds <= 0.0 || sigma_f_hz <= 0.0)
        throw std::invalid_argument("gaussian_smooth_tfr: sigmas must be positive");
    if (w.values.empty())
        throw std::invalid_argument("gaussian_smooth_tfr: input has no real values");

    Tfr out = w;
    detail::smooth_pixels(out.values, out.rows, out.cols, sigma_f_hz / w.df,
                          sigma_t_seconds / w.dt);
    return out;
}

}  // namespace tfden
