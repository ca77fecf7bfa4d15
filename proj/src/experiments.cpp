#include "tfden/experiments.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "tfden/analysis.hpp"

namespace tfden {

using nlohmann::json;

namespace {

json stft_to_json(const StftParams& p) {
    return json{{"window_sigma", p.window_sigma},
                {"window_len", p.window_len},
                {"hop", p.hop},
                {"nfft", p.nfft}};
}

void stft_from_json(const json& j, StftParams& p) {
    p.window_sigma = j.value("window_sigma", p.window_sigma);
    p.window_len = j.value("window_len", p.window_len);
    p.hop = j.value("hop", p.hop);
    p.nfft = j.value("nfft", p.nfft);
}

json input_to_json(const InputConfig& in) {
    return json{{"type", in.type},       {"path", in.path},
                {"duration_s", in.duration_s}, {"fs", in.fs},
                {"seed", in.seed},       {"snr_db", in.snr_db}};
}

void input_from_json(const json& j, InputConfig& in) {
    in.type = j.value("type", in.type);
    in.path = j.value("path", in.path);
    in.duration_s = j.value("duration_s", in.duration_s);
    in.fs = j.value("fs", in.fs);
    in.seed = j.value("seed", in.seed);
    in.snr_db = j.value("snr_db", in.snr_db);
}

json filter_to_json(const FilterParams& f) {
    return json{{"h", f.h},
                {"rho", f.rho},
                {"eps", f.eps},
                {"eps_tilde", f.eps_tilde},
                {"sigma_smooth", f.sigma_smooth},
                {"dtau", f.dtau},
                {"tol", f.tol},
                {"max_iter", f.max_iter},
                {"steps", f.fixed_steps},
                {"q", f.q_levels}};
}

void filter_from_json(const json& j, FilterParams& f) {
    f.h = j.value("h", f.h);
    f.rho = j.value("rho", f.rho);
    f.eps = j.value("eps", f.eps);
    f.eps_tilde = j.value("eps_tilde", f.eps_tilde);
    f.sigma_smooth = j.value("sigma_smooth", f.sigma_smooth);
    f.dtau = j.value("dtau", f.dtau);
    f.tol = j.value("tol", f.tol);
    f.max_iter = j.value("max_iter", f.max_iter);
    f.fixed_steps = j.value("steps", f.fixed_steps);
    f.q_levels = j.value("q", f.q_levels);
}

}  // namespace

std::string run_config_to_json(const RunConfig& cfg) {
    json j{{"input", input_to_json(cfg.input)},
           {"stft", stft_to_json(cfg.stft)},
           {"filter", filter_to_json(cfg.filter)},
           {"alpha", cfg.alpha},
           {"beta", cfg.beta},
           {"i_min", cfg.i_min},
           {"out_dir", cfg.out_dir},
           {"filters", cfg.filters}};
    return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
    json j = json::parse(text);
    RunConfig cfg;
    if (j.contains("input")) input_from_json(j["input"], cfg.input);
    if (j.contains("stft")) stft_from_json(j["stft"], cfg.stft);
    if (j.contains("filter")) filter_from_json(j["filter"], cfg.filter);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.i_min = j.value("i_min", cfg.i_min);
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    if (j.contains("filters")) cfg.filters = j["filters"].get<std::vector<std::string>>();
    return cfg;
}

RunConfig run_config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return run_config_from_json(ss.str());
}

Signal experiment1_clean_signal(const InputConfig& in) {
    return gen_tone_chirp_mix(in.duration_s, in.fs);
}

Signal experiment1_noisy_signal(const InputConfig& in) {
    Signal clean = experiment1_clean_signal(in);
    Signal noise = gen_uniform_noise(clean.samples.size(), in.seed, in.fs);
    return mix_at_snr(clean, noise, in.snr_db);
}

Tfr pipeline_image(const Signal& signal, const StftParams& p, int q_levels) {
    const Window w = gaussian_window(p.window_sigma, p.window_len);
    const Tfr g = stft(signal, w, p.hop, p.nfft);
    const Tfr s = spectrogram(g);
    return normalize_to_image(s, q_levels);
}

BurstSurrogate make_burst_line_surrogate(double fs, double duration_s,
                                         std::uint64_t seed) {
    const auto n = static_cast<std::size_t>(std::llround(duration_s * fs));
    BurstSurrogate out;
    out.signal.sample_rate = fs;
    out.signal.samples.assign(n, 0.0);
    out.burst_center_s = 0.62 * duration_s;
    out.burst_half_width_s = 0.05 * duration_s;

    // Persistent "normal beat" line.
    const double f_line = 0.15 * fs / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        out.signal.samples[i] = std::sin(2.0 * M_PI * f_line * t);
    }

    // Strong low-frequency noise bump peaking away from the burst: raw uniform
    // noise through a lowpass, shaped by a raised-cosine envelope.
    {
        Signal raw;
        raw.sample_rate = fs;
        raw.samples = uniform_noise_raw(n, seed);
        Signal low = bandpass_downsample(raw, 0.0, 0.08 * fs / 2.0, fs);
        const double t_peak = 0.25 * duration_s;
        const double half = 0.22 * duration_s;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / fs;
            const double u = (t - t_peak) / half;
            const double env = std::abs(u) < 1.0 ? 0.5 * (1.0 + std::cos(M_PI * u)) : 0.0;
            out.signal.samples[i] += 6.0 * env * low.samples[i];
        }
    }

    // Weak broadband burst: white noise gated around the burst center.
    {
        std::vector<double> white = uniform_noise_raw(n, seed + 1);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = static_cast<double>(i) / fs;
            const double u = (t - out.burst_center_s) / out.burst_half_width_s;
            const double env = std::abs(u) < 1.0 ? 0.5 * (1.0 + std::cos(M_PI * u)) : 0.0;
            out.signal.samples[i] += 0.35 * env * white[i];
        }
    }
    return out;
}

DenoiseRun run_filter(const std::string& name, const Tfr& image,
                      const FilterParams& params) {
    DenoiseRun run;
    run.filter = name;
    if (name == "nf") {
        run.result = nf_iterate(image, params);
    } else if (name == "yaroslavsky") {
        run.result = yaroslavsky_iterate(image, params);
    } else if (name == "tv") {
        run.result = tv_transport_denoise(image, params);
    } else {
        throw std::invalid_argument("unknown filter '" + name +
                                    "' (expected nf, yaroslavsky or tv)");
    }
    return run;
}

}  // namespace tfden
