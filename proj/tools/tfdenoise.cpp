#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tfden/analysis.hpp"
#include "tfden/experiments.hpp"
#include "tfden/filters.hpp"
#include "tfden/io.hpp"
#include "tfden/wav.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tfden;

namespace {

struct CliState {
    RunConfig cfg;
    bool synthetic = true;
    double band_lo = -1.0, band_hi = -1.0, target_fs = -1.0;
};

Signal load_input(const CliState& st) {
    if (st.synthetic) return experiment1_noisy_signal(st.cfg.input);
    Signal s = load_wav(st.cfg.input.path);
    if (st.band_lo >= 0.0 && st.band_hi > 0.0 && st.target_fs > 0.0)
        s = bandpass_downsample(s, st.band_lo, st.band_hi, st.target_fs);
    return s;
}

json result_report(const DenoiseRun& run) {
    json j{{"filter", run.filter},
           {"iterations", run.result.iterations},
           {"per_iter_change", run.result.per_iter_change},
           {"hit_max_iter", run.result.hit_max_iter},
           {"setup_seconds", run.result.setup_seconds},
           {"iter_seconds", run.result.iter_seconds},
           {"core_seconds", run.result.core_seconds()}};
    if (run.mse >= 0.0) j["mse"] = run.mse;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

int cmd_spectrogram(const CliState& st) {
    const Signal sig = load_input(st);
    const Tfr image = pipeline_image(sig, st.cfg.stft, st.cfg.filter.q_levels);
    fs::create_directories(st.cfg.out_dir);
    write_pgm(image, st.cfg.out_dir + "/spectrogram.pgm");
    write_matrix_csv(image, st.cfg.out_dir + "/spectrogram.csv");
    std::printf("spectrogram: %dx%d (cols x rows) -> %s\n", image.cols, image.rows,
                st.cfg.out_dir.c_str());
    return 0;
}

int cmd_denoise(const CliState& st, const std::string& filter_name) {
    const Signal sig = load_input(st);
    const Tfr image = pipeline_image(sig, st.cfg.stft, st.cfg.filter.q_levels);
    DenoiseRun run = run_filter(filter_name, image, st.cfg.filter);
    if (st.synthetic) {
        const Tfr clean = pipeline_image(experiment1_clean_signal(st.cfg.input),
                                         st.cfg.stft, st.cfg.filter.q_levels);
        run.mse = relative_mse(clean, run.result.image);
    }
    fs::create_directories(st.cfg.out_dir);
    write_pgm(run.result.image, st.cfg.out_dir + "/denoised_" + filter_name + ".pgm");
    write_text(st.cfg.out_dir + "/report_" + filter_name + ".json",
               result_report(run).dump(2) + "\n");
    std::printf("%s: %d iterations, core %.3fs", filter_name.c_str(),
                run.result.iterations, run.result.core_seconds());
    if (run.mse >= 0.0) std::printf(", mse %.4f", run.mse);
    std::printf("\n");
    return 0;
}

int cmd_iflines(const CliState& st) {
    const Signal sig = load_input(st);
    const Tfr image = pipeline_image(sig, st.cfg.stft, st.cfg.filter.q_levels);
    std::optional<double> beta;
    if (st.cfg.beta >= 0.0) beta = st.cfg.beta;
    const IfTrack track = extract_if_lines(image, beta, st.cfg.i_min);
    fs::create_directories(st.cfg.out_dir);
    write_iftrack_csv(track, st.cfg.out_dir + "/iflines.csv");
    std::printf("iflines: %zu points (beta %.3f, i_min %.3f) -> %s/iflines.csv\n",
                track.points.size(), track.beta, track.i_min, st.cfg.out_dir.c_str());
    return 0;
}

int cmd_experiment1(const CliState& st, bool all) {
    const Tfr noisy = pipeline_image(experiment1_noisy_signal(st.cfg.input),
                                     st.cfg.stft, st.cfg.filter.q_levels);
    const Tfr clean = pipeline_image(experiment1_clean_signal(st.cfg.input),
                                     st.cfg.stft, st.cfg.filter.q_levels);
    std::vector<std::string> names = st.cfg.filters;
    if (all) names = {"nf", "yaroslavsky", "tv"};

    fs::create_directories(st.cfg.out_dir);
    write_pgm(noisy, st.cfg.out_dir + "/noisy.pgm");
    write_pgm(clean, st.cfg.out_dir + "/clean.pgm");

    json report = json::array();
    for (const auto& name : names) {
        DenoiseRun run = run_filter(name, noisy, st.cfg.filter);
        run.mse = relative_mse(clean, run.result.image);
        write_pgm(run.result.image, st.cfg.out_dir + "/denoised_" + name + ".pgm");
        report.push_back(result_report(run));
        std::printf("%-12s mse %.4f  core %.3fs  (%d iterations)\n", name.c_str(),
                    run.mse, run.result.core_seconds(), run.result.iterations);
    }
    write_text(st.cfg.out_dir + "/experiment1.json", report.dump(2) + "\n");
    return 0;
}

int cmd_experiment3(const CliState& st) {
    Signal sig;
    double burst_lo = -1.0, burst_hi = -1.0;
    if (st.synthetic) {
        BurstSurrogate sur = make_burst_line_surrogate(st.cfg.input.fs,
                                                       st.cfg.input.duration_s,
                                                       st.cfg.input.seed);
        sig = std::move(sur.signal);
        burst_lo = sur.burst_center_s - sur.burst_half_width_s;
        burst_hi = sur.burst_center_s + sur.burst_half_width_s;
    } else {
        sig = load_wav(st.cfg.input.path);
    }
    const Tfr s0 = pipeline_image(sig, st.cfg.stft, st.cfg.filter.q_levels);
    const FilterResult nf = nf_iterate(s0, st.cfg.filter);
    const Tfr subtracted = spectral_subtract(s0, nf.image, st.cfg.alpha);
    const EnergyProfile prof0 = energy_profile(s0);
    const EnergyProfile prof_sub = energy_profile(subtracted);

    fs::create_directories(st.cfg.out_dir);
    write_pgm(s0, st.cfg.out_dir + "/s0.pgm");
    write_pgm(nf.image, st.cfg.out_dir + "/sn.pgm");
    write_pgm(subtracted, st.cfg.out_dir + "/subtracted.pgm");
    write_profile_csv(prof0, st.cfg.out_dir + "/profile_s0.csv");
    write_profile_csv(prof_sub, st.cfg.out_dir + "/profile_subtracted.csv");

    json report{{"alpha", st.cfg.alpha},
                {"argmax_s0_seconds", prof0.t[prof0.argmax()]},
                {"argmax_subtracted_seconds", prof_sub.t[prof_sub.argmax()]}};
    if (burst_lo >= 0.0) {
        report["burst_window_seconds"] = {burst_lo, burst_hi};
    }
    write_text(st.cfg.out_dir + "/experiment3.json", report.dump(2) + "\n");
    std::printf("experiment3: profile argmax %.3fs (noisy) -> %.3fs (subtracted)\n",
                prof0.t[prof0.argmax()], prof_sub.t[prof_sub.argmax()]);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CliState st;

    // --config seeds every default; explicit flags override it.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                st.cfg = run_config_from_json_file(argv[i + 1]);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return 2;
            }
        }
    }

    CLI::App app{"Denoises 1-D signals by image-filtering their spectrograms"};
    app.set_help_flag("--help", "print help");  // frees -h / --h for the filter bandwidth
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON run configuration");

    std::string filter_name = "nf";
    bool all_filters = false;

    auto configure = [&](CLI::App* sub, bool with_filter) {
        sub->set_help_flag("--help", "print help");
        sub->add_option("--config", config_path)->configurable(false);
        sub->add_option("--input", st.cfg.input.path, "input WAV path")
            ->each([&](const std::string&) { st.synthetic = false; });
        sub->add_flag_callback("--synthetic", [&] { st.synthetic = true; },
                               "use the synthetic tone/chirp mix (default)");
        sub->add_option("--duration", st.cfg.input.duration_s, "synthetic duration (s)");
        sub->add_option("--fs", st.cfg.input.fs, "synthetic sample rate (Hz)");
        sub->add_option("--seed", st.cfg.input.seed, "noise seed");
        sub->add_option("--snr-db", st.cfg.input.snr_db, "synthetic mixing SNR (dB)");
        sub->add_option("--window-sigma", st.cfg.stft.window_sigma, "window sigma (samples)");
        sub->add_option("--window-len", st.cfg.stft.window_len, "window length (odd)");
        sub->add_option("--hop", st.cfg.stft.hop, "STFT hop (samples)");
        sub->add_option("--nfft", st.cfg.stft.nfft, "FFT length");
        sub->add_option("--q", st.cfg.filter.q_levels, "quantization levels (default 255)");
        sub->add_option("--h", st.cfg.filter.h, "gray-level bandwidth");
        sub->add_option("--rho", st.cfg.filter.rho, "spatial bandwidth (pixels)");
        sub->add_option("--eps", st.cfg.filter.eps, "transport strength");
        sub->add_option("--eps-tilde", st.cfg.filter.eps_tilde, "TV regularization");
        sub->add_option("--sigma-smooth", st.cfg.filter.sigma_smooth,
                        "transport presmoothing sigma (pixels)");
        sub->add_option("--dtau", st.cfg.filter.dtau, "artificial time step");
        sub->add_option("--tol", st.cfg.filter.tol, "relative-change stopping tolerance");
        sub->add_option("--max-iter", st.cfg.filter.max_iter, "iteration cap");
        sub->add_option("--steps", st.cfg.filter.fixed_steps, "explicit step count");
        sub->add_option("--alpha", st.cfg.alpha, "spectral subtraction threshold");
        sub->add_option("--beta", st.cfg.beta, "IF threshold (negative = image mean)");
        sub->add_option("--i-min", st.cfg.i_min, "IF intensity threshold");
        sub->add_option("--band-lo", st.band_lo, "bandpass low edge for WAV input (Hz)");
        sub->add_option("--band-hi", st.band_hi, "bandpass high edge for WAV input (Hz)");
        sub->add_option("--target-fs", st.target_fs, "decimation target rate (Hz)");
        sub->add_option("--out-dir", st.cfg.out_dir, "output directory");
        if (with_filter)
            sub->add_option("--filter", filter_name, "nf | yaroslavsky | tv");
    };

    CLI::App* spec = app.add_subcommand("spectrogram", "compute and export the spectrogram image");
    configure(spec, false);
    CLI::App* den = app.add_subcommand("denoise", "denoise the spectrogram with one filter");
    configure(den, true);
    CLI::App* ifl = app.add_subcommand("iflines", "extract instantaneous-frequency candidates");
    configure(ifl, false);
    CLI::App* ex1 = app.add_subcommand("experiment1", "synthetic-mix benchmark (MSE and timing)");
    configure(ex1, true);
    ex1->add_flag("--all", all_filters, "run nf, yaroslavsky and tv");
    CLI::App* ex3 = app.add_subcommand("experiment3", "burst detection by spectral subtraction");
    configure(ex3, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (spec->parsed()) return cmd_spectrogram(st);
        if (den->parsed()) return cmd_denoise(st, filter_name);
        if (ifl->parsed()) return cmd_iflines(st);
        if (ex1->parsed()) return cmd_experiment1(st, all_filters);
        if (ex3->parsed()) return cmd_experiment3(st);
    } catch (const SolverError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
