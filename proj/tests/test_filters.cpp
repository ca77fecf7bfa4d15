#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "tfden/filters.hpp"
#include "tfden/signal.hpp"

using namespace tfden;

namespace {

constexpr double kPi = 3.14159265358979323846;

Tfr make_image(int rows, int cols, std::vector<double> vals) {
    Tfr t;
    t.kind = TfrKind::Image;
    t.rows = rows;
    t.cols = cols;
    t.dt = t.df = 1.0;
    t.values = std::move(vals);
    return t;
}

Tfr random_image(int rows, int cols, std::mt19937_64& rng, double top = 255.0) {
    Tfr t = make_image(rows, cols, {});
    t.values.resize(static_cast<std::size_t>(rows) * cols);
    for (double& v : t.values) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 * top;
    return t;
}

Tfr quantized_as_image(const Tfr& img, int q) {
    const QuantizedSpectrogram qs = quantize(img, q);
    Tfr out = img;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = static_cast<double>(qs.levels[i]);
    return out;
}

}  // namespace

TEST_CASE("nf_level_step fixes a constant image") {
    const Tfr img = make_image(3, 3, std::vector<double>(9, 7.0));
    const LevelIndex idx = build_level_index(quantize(img, 255));
    std::vector<double> sums(256, 0.0);
    sums[7] = 9.0 * 7.0;
    const auto v = nf_level_step(idx, sums, 10.0);
    CHECK(v[7] == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("nf_level_step with huge h reaches the global mean") {
    std::mt19937_64 rng(1);
    const Tfr img = random_image(8, 8, rng);
    const QuantizedSpectrogram qs = quantize(img, 255);
    const LevelIndex idx = build_level_index(qs);
    std::vector<double> sums(256, 0.0);
    double mean = 0.0;
    for (int lev : qs.levels) {
        sums[lev] += lev;
        mean += lev;
    }
    mean /= static_cast<double>(qs.levels.size());
    const auto v = nf_level_step(idx, sums, 1e6);
    for (int j = 0; j <= 255; ++j) CHECK(v[j] == doctest::Approx(mean).epsilon(1e-9));
}

TEST_CASE("nf_level_step against a hand-expanded three-level case") {
    // counts C = [2, 1, 1], sums = [4, 3, 5], h = 1
    const Tfr img = make_image(2, 2, {0.0, 0.0, 1.0, 2.0});
    const LevelIndex idx = build_level_index(quantize(img, 255));
    std::vector<double> sums(256, 0.0);
    sums[0] = 4.0;
    sums[1] = 3.0;
    sums[2] = 5.0;
    const auto v = nf_level_step(idx, sums, 1.0);

    // independent direct evaluation of the double sum
    const double c[3] = {2.0, 1.0, 1.0};
    const double s[3] = {4.0, 3.0, 5.0};
    for (int j = 0; j < 3; ++j) {
        double num = 0.0, den = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double w = std::exp(-static_cast<double>((j - k) * (j - k)));
            num += w * s[k];
            den += w * c[k];
        }
        CHECK(v[j] == doctest::Approx(num / den).epsilon(1e-12));
    }
}

TEST_CASE("nf_level_step rejects an empty index and bad h") {
    LevelIndex idx;
    idx.counts.assign(256, 0);
    idx.members.resize(256);
    idx.total = 0;
    CHECK_THROWS_AS(nf_level_step(idx, std::vector<double>(256, 0.0), 10.0),
                    std::invalid_argument);
}

TEST_CASE("nf_iterate fixes a constant image in at most one iteration") {
    const Tfr img = make_image(6, 5, std::vector<double>(30, 7.0));
    FilterParams p;
    const FilterResult r = nf_iterate(img, p);
    CHECK(r.iterations <= 1);
    for (double v : r.image.values) CHECK(v == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("nf brute force on two-pixel images") {
    // equal gray values average both pixels
    const Tfr s0a = make_image(1, 2, {0.0, 0.0});
    const Tfr sia = make_image(1, 2, {2.0, 4.0});
    const Tfr outa = nf_brute_force(s0a, sia, 10.0);
    CHECK(outa.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(outa.values[1] == doctest::Approx(3.0).epsilon(1e-14));

    // opposite extremes barely interact at h = 10
    const Tfr s0b = make_image(1, 2, {0.0, 255.0});
    const Tfr outb = nf_brute_force(s0b, s0b, 10.0);
    CHECK(std::abs(outb.values[0] - 0.0) <= 1e-9);
    CHECK(std::abs(outb.values[1] - 255.0) <= 1e-9);

    CHECK_THROWS_AS(nf_brute_force(s0a, make_image(1, 3, {0, 0, 0}), 10.0),
                    std::invalid_argument);
}

TEST_CASE("fast level-set path matches the brute force oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 6; ++trial) {
        const int rows = 4 + static_cast<int>(rng() % 13);
        const int cols = 4 + static_cast<int>(rng() % 13);
        const Tfr img = random_image(rows, cols, rng);
        const double h = 1.0 + static_cast<double>(rng() % 49);

        FilterParams p;
        p.h = h;
        p.max_iter = 2;
        p.tol = 1e-300;
        const FilterResult fast = nf_iterate(img, p);

        const Tfr q = quantized_as_image(img, 255);
        const Tfr bf1 = nf_brute_force(q, q, h);
        const Tfr bf2 = nf_brute_force(q, bf1, h);

        double worst = 0.0;
        for (std::size_t i = 0; i < q.values.size(); ++i)
            worst = std::max(worst, std::abs(fast.image.values[i] - bf2.values[i]));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("nf iteration contracts the value range") {
    std::mt19937_64 rng(77);
    const Tfr img = random_image(24, 24, rng);
    FilterParams p;
    p.tol = 1e-300;
    Tfr prev = quantized_as_image(img, 255);
    for (int it = 1; it <= 4; ++it) {
        p.max_iter = it;
        const FilterResult r = nf_iterate(img, p);
        const auto [pmin, pmax] = std::minmax_element(prev.values.begin(), prev.values.end());
        const auto [cmin, cmax] =
            std::minmax_element(r.image.values.begin(), r.image.values.end());
        CHECK(*cmin >= *pmin - 1e-12);
        CHECK(*cmax <= *pmax + 1e-12);
        prev = r.image;
    }
}

TEST_CASE("yaroslavsky fixes a constant image") {
    const Tfr img = make_image(8, 8, std::vector<double>(64, 42.0));
    FilterParams p;
    p.fixed_steps = 3;
    const FilterResult r = yaroslavsky_iterate(img, p);
    for (double v : r.image.values) CHECK(v == doctest::Approx(42.0).epsilon(1e-12));
}

TEST_CASE("yaroslavsky degenerates to the neighborhood filter at huge rho") {
    std::mt19937_64 rng(31);
    const Tfr img = random_image(20, 20, rng);

    FilterParams py;
    py.rho = 1e6;
    py.truncate_spatial = false;
    py.fixed_steps = 1;
    const FilterResult y = yaroslavsky_iterate(img, py);

    FilterParams pn;
    pn.max_iter = 1;
    pn.tol = 1e-300;
    const FilterResult nf = nf_iterate(img, pn);

    double worst = 0.0;
    for (std::size_t i = 0; i < img.values.size(); ++i)
        worst = std::max(worst, std::abs(y.image.values[i] - nf.image.values[i]));
    CHECK(worst <= 1e-6);
}

TEST_CASE("yaroslavsky step count follows the PDE schedule") {
    std::mt19937_64 rng(32);
    const Tfr img = random_image(12, 12, rng);
    FilterParams p;
    p.eps = 0.2;
    p.dtau = 0.25;  // 1 / (eps dtau) = 20
    const FilterResult r = yaroslavsky_iterate(img, p);
    CHECK(r.iterations == 20);
    CHECK(r.per_iter_change.size() == 20);
}

TEST_CASE("max principle for nf and yaroslavsky") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const Tfr img = random_image(6 + static_cast<int>(rng() % 10),
                                     6 + static_cast<int>(rng() % 10), rng);
        const Tfr q = quantized_as_image(img, 255);
        const auto [mn, mx] = std::minmax_element(q.values.begin(), q.values.end());

        FilterParams p;
        p.h = 1.0 + static_cast<double>(rng() % 30);
        p.rho = 1.0 + static_cast<double>(rng() % 8);
        p.fixed_steps = 2;
        p.max_iter = 2;
        p.tol = 1e-300;
        const FilterResult nf = nf_iterate(img, p);
        const FilterResult y = yaroslavsky_iterate(img, p);
        for (double v : nf.image.values) {
            CHECK(v >= *mn - 1e-12);
            CHECK(v <= *mx + 1e-12);
        }
        for (double v : y.image.values) {
            CHECK(v >= *mn - 1e-12);
            CHECK(v <= *mx + 1e-12);
        }
    }
}

TEST_CASE("nlmeans leaves a constant image unchanged") {
    Tfr img = make_image(10, 10, std::vector<double>(100, 5.5));
    img.kind = TfrKind::WignerVille;
    const Tfr out = nlmeans(img, 10.0, 1.0);
    for (double v : out.values) CHECK(v == doctest::Approx(5.5).epsilon(1e-12));
}

TEST_CASE("nlmeans treats identical neighborhoods identically") {
    std::mt19937_64 rng(44);
    Tfr img = random_image(12, 16, rng);
    // duplicate a three-row band so the patch neighborhoods of the two center
    // rows coincide (patch radius 1 at sigma 0.2)
    for (int c = 0; c < img.cols; ++c) {
        img.at(8, c) = img.at(2, c);
        img.at(9, c) = img.at(3, c);
        img.at(10, c) = img.at(4, c);
    }
    const Tfr out = nlmeans(img, 10.0, 0.2);
    for (int c = 0; c < img.cols; ++c)
        CHECK(out.at(3, c) == doctest::Approx(out.at(9, c)).epsilon(1e-12));
}

TEST_CASE("nlmeans validates parameters") {
    const Tfr img = make_image(4, 4, std::vector<double>(16, 1.0));
    CHECK_THROWS_AS(nlmeans(img, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(nlmeans(img, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("nlmeans on the Wigner-Ville tracks nf on the spectrogram") {
    // Each pipeline filters its own representation of a two-tone signal; the
    // per-frame ridge maxima should rank-correlate strongly.
    const double fs = 8000.0;
    const std::size_t n = 560;
    Signal sig;
    sig.sample_rate = fs;
    sig.samples.resize(n);
    std::mt19937_64 rng(5);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double noise = 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
        sig.samples[i] = std::sin(2.0 * kPi * 500.0 * t) +
                         std::sin(2.0 * kPi * 700.0 * t) + 0.35 * noise;
    }

    const double sigma_w = 48.0;
    const int n_fft = 512, max_lag = 255;
    const Tfr sp = spectrogram(stft(sig, gaussian_window(sigma_w, 385), 1, n_fft));
    const Tfr wv = pseudo_wigner_ville(sig, max_lag);

    // interior crop around the tones
    const int r0 = 20, r1 = 70, c0 = 200, c1 = 340;
    auto crop = [&](const Tfr& t) {
        Tfr out = make_image(r1 - r0, c1 - c0, {});
        out.values.resize(static_cast<std::size_t>(out.rows) * out.cols);
        for (int r = r0; r < r1; ++r)
            for (int c = c0; c < c1; ++c)
                out.at(r - r0, c - c0) = t.at(r, c);
        return out;
    };
    const Tfr sp_img = normalize_to_image(crop(sp), 255);
    Tfr wv_img = normalize_to_image(crop(wv), 255);
    wv_img.kind = TfrKind::WignerVille;

    FilterParams p;
    p.max_iter = 1;
    p.tol = 1e-300;
    const FilterResult nf = nf_iterate(sp_img, p);
    const Tfr nl = nlmeans(wv_img, 30.0, 1.0);

    auto column_max = [](const Tfr& t) {
        std::vector<double> m(t.cols, -1e300);
        for (int r = 0; r < t.rows; ++r)
            for (int c = 0; c < t.cols; ++c) m[c] = std::max(m[c], t.at(r, c));
        return m;
    };
    const auto a = column_max(nf.image);
    const auto b = column_max(nl);

    // Spearman rank correlation
    auto ranks = [](const std::vector<double>& x) {
        std::vector<int> order(x.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int i, int j) { return x[i] < x[j]; });
        std::vector<double> rk(x.size());
        for (std::size_t i = 0; i < order.size(); ++i) rk[order[i]] = static_cast<double>(i);
        return rk;
    };
    const auto ra = ranks(a), rb = ranks(b);
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= ra.size();
    mb /= rb.size();
    double cov = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    const double spearman = cov / std::sqrt(va * vb);
    CHECK(spearman >= 0.9);
}

TEST_CASE("f_correspondence is zero for coincident pixels and zero fields") {
    Tfr wv = make_image(32, 32, std::vector<double>(1024, 0.0));
    wv.kind = TfrKind::WignerVille;
    Tfr s = make_image(32, 32, std::vector<double>(1024, 0.0));
    s.kind = TfrKind::Spectrogram;
    CHECK(f_correspondence(wv, 0.01, s, 200, 1) == 0.0);

    Tfr mis = make_image(32, 31, std::vector<double>(32 * 31, 0.0));
    CHECK_THROWS_AS(f_correspondence(wv, 0.01, mis, 10, 1), std::invalid_argument);
}

TEST_CASE("tv flow fixes a constant image") {
    const Tfr img = make_image(16, 16, std::vector<double>(256, 9.0));
    FilterParams p;
    p.eps = 0.1;
    p.dtau = 1.0;  // 10 steps
    const FilterResult r = tv_transport_denoise(img, p);
    CHECK(r.iterations == 10);
    for (double v : r.image.values) CHECK(v == doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("tv flow with eps 0 decreases the regularized functional") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 3; ++trial) {
        // noisy step edge
        Tfr img = make_image(24, 24, {});
        img.values.resize(576);
        for (int r = 0; r < 24; ++r)
            for (int c = 0; c < 24; ++c)
                img.at(r, c) = (c < 12 ? 60.0 : 190.0) +
                               40.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5);
        FilterParams p;
        p.eps = 0.0;
        p.fixed_steps = 1;
        Tfr cur = img;
        double prev = tv_functional(cur, p.eps_tilde);
        for (int s = 0; s < 20; ++s) {
            const FilterResult r = tv_transport_denoise(cur, p);
            cur = r.image;
            const double now = tv_functional(cur, p.eps_tilde);
            CHECK(now <= prev * (1.0 + 1e-9) + 1e-6);
            prev = now;
        }
    }
}

TEST_CASE("tv flow with eps 0 conserves the mean") {
    std::mt19937_64 rng(56);
    for (int trial = 0; trial < 10; ++trial) {
        const Tfr img = random_image(10 + static_cast<int>(rng() % 20),
                                     10 + static_cast<int>(rng() % 20), rng);
        FilterParams p;
        p.eps = 0.0;
        p.fixed_steps = 5;
        const FilterResult r = tv_transport_denoise(img, p);
        double before = 0.0, after = 0.0;
        for (double v : img.values) before += v;
        for (double v : r.image.values) after += v;
        before /= static_cast<double>(img.values.size());
        after /= static_cast<double>(img.values.size());
        CHECK(std::abs(after - before) <= 1e-7 * std::max(1.0, std::abs(before)));
    }
}

TEST_CASE("tv flow requires a step count when eps is zero") {
    const Tfr img = make_image(4, 4, std::vector<double>(16, 1.0));
    FilterParams p;
    p.eps = 0.0;
    p.fixed_steps = 0;
    CHECK_THROWS_AS(tv_transport_denoise(img, p), std::invalid_argument);
}

TEST_CASE("pde step count derivations") {
    FilterParams p;
    p.eps = 0.02;
    p.dtau = 2.5;
    CHECK(pde_step_count(p) == 20);
    p.eps = 0.2;
    p.dtau = 0.25;
    CHECK(pde_step_count(p) == 20);
    p.fixed_steps = 7;
    CHECK(pde_step_count(p) == 7);
}
