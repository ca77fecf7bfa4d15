#include "tfden/filters.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

namespace tfden {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_image_in_range(const Tfr& image, int q_levels, const char* who) {
    if (image.kind != TfrKind::Image)
        throw std::invalid_argument(std::string(who) + ": input kind must be image");
    if (image.values.empty())
        throw std::invalid_argument(std::string(who) + ": empty image");
    for (double v : image.values)
        if (v < 0.0 || v > q_levels)
            throw std::invalid_argument(std::string(who) + ": image values outside [0, Q]");
}

// exp(-((j-k)/h)^2) by level distance.
std::vector<double> level_kernel(int q_levels, double h) {
    std::vector<double> a(q_levels + 1);
    for (int d = 0; d <= q_levels; ++d)
        a[d] = std::exp(-(static_cast<double>(d) * d) / (h * h));
    return a;
}

double relative_change(const std::vector<double>& next, const std::vector<double>& prev) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
        const double d = next[i] - prev[i];
        num += d * d;
        den += prev[i] * prev[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

}  // namespace

int pde_step_count(const FilterParams& params) {
    if (params.fixed_steps > 0) return params.fixed_steps;
    if (params.eps <= 0.0)
        throw std::invalid_argument("pde_step_count: eps = 0 requires an explicit step count");
    if (params.dtau <= 0.0) throw std::invalid_argument("pde_step_count: dtau must be positive");
    const long steps = std::lround(1.0 / (params.eps * params.dtau));
    return static_cast<int>(std::max(1L, steps));
}

std::vector<double> nf_level_step(const LevelIndex& index,
                                  const std::vector<double>& level_sums,
                                  double h) {
    const int q = static_cast<int>(index.counts.size()) - 1;
    if (index.total == 0)
        throw std::invalid_argument("nf_level_step: empty level index");
    if (level_sums.size() != index.counts.size())
        throw std::invalid_argument("nf_level_step: level_sums size mismatch");
    if (h <= 0.0) throw std::invalid_argument("nf_level_step: h must be positive");

    const auto a = level_kernel(q, h);
    std::vector<double> out(q + 1, 0.0);
    for (int j = 0; j <= q; ++j) {
        double num = 0.0, den = 0.0;
        for (int k = 0; k <= q; ++k) {
            if (index.counts[k] == 0) continue;
            const double w = a[std::abs(j - k)];
            num += w * level_sums[k];
            den += w * static_cast<double>(index.counts[k]);
        }
        out[j] = num / den;
    }
    return out;
}

FilterResult nf_iterate(const Tfr& s0_image, const FilterParams& params) {
    require_image_in_range(s0_image, params.q_levels, "nf_iterate");
    if (params.tol <= 0.0) throw std::invalid_argument("nf_iterate: tol must be positive");

    FilterResult res;
    const auto t_setup = Clock::now();
    const QuantizedSpectrogram qs = quantize(s0_image, params.q_levels);
    const LevelIndex index = build_level_index(qs);
    res.setup_seconds = seconds_since(t_setup);

    // After the first step every level set carries one value, so the whole
    // iteration lives on Q+1 level values; pixels are only relabeled at the end.
    const auto t_iter = Clock::now();
    const int q = params.q_levels;
    std::vector<double> v(q + 1);
    for (int k = 0; k <= q; ++k) v[k] = k;

    std::vector<double> sums(q + 1);
    for (int i = 0; i < params.max_iter; ++i) {
        for (int k = 0; k <= q; ++k)
            sums[k] = static_cast<double>(index.counts[k]) * v[k];
        std::vector<double> next = nf_level_step(index, sums, params.h);

        double num = 0.0, den = 0.0;
        for (int k = 0; k <= q; ++k) {
            if (index.counts[k] == 0) continue;
            const double c = static_cast<double>(index.counts[k]);
            const double d = next[k] - v[k];
            num += c * d * d;
            den += c * v[k] * v[k];
        }
        const double change = den > 0.0 ? std::sqrt(num / den) : 0.0;
        res.per_iter_change.push_back(change);
        ++res.iterations;
        v.swap(next);
        if (change < params.tol) break;
    }
    res.hit_max_iter = res.iterations == params.max_iter &&
                       (res.per_iter_change.empty() || res.per_iter_change.back() >= params.tol);
    res.iter_seconds = seconds_since(t_iter);

    res.image = s0_image;
    for (std::size_t i = 0; i < res.image.values.size(); ++i)
        res.image.values[i] = v[qs.levels[i]];
    return res;
}

Tfr nf_brute_force(const Tfr& s0_image, const Tfr& si_image, double h) {
    if (s0_image.rows != si_image.rows || s0_image.cols != si_image.cols)
        throw std::invalid_argument("nf_brute_force: shape mismatch");
    if (s0_image.values.empty())
        throw std::invalid_argument("nf_brute_force: empty image");
    if (h <= 0.0) throw std::invalid_argument("nf_brute_force: h must be positive");

    const std::size_t n = s0_image.values.size();
    const double inv_h2 = 1.0 / (h * h);
    Tfr out = si_image;
    for (std::size_t x = 0; x < n; ++x) {
        const double s0x = s0_image.values[x];
        long double num = 0.0L, den = 0.0L;
        for (std::size_t y = 0; y < n; ++y) {
            const double d = s0x - s0_image.values[y];
            const double w = std::exp(-d * d * inv_h2);
            num += static_cast<long double>(w) * si_image.values[y];
            den += w;
        }
        out.values[x] = static_cast<double>(num / den);
    }
    return out;
}

FilterResult yaroslavsky_iterate(const Tfr& s0_image, const FilterParams& params) {
    require_image_in_range(s0_image, params.q_levels, "yaroslavsky_iterate");
    if (params.rho <= 0.0)
        throw std::invalid_argument("yaroslavsky_iterate: rho must be positive");

    FilterResult res;
    const auto t_setup = Clock::now();
    const QuantizedSpectrogram qs = quantize(s0_image, params.q_levels);
    const int rows = qs.rows, cols = qs.cols, q = params.q_levels;
    const int steps = pde_step_count(params);

    // Gray-level weights by level pair and the separable spatial profile.
    std::vector<double> atab((q + 1) * (q + 1));
    {
        const auto a = level_kernel(q, params.h);
        for (int j = 0; j <= q; ++j)
            for (int k = 0; k <= q; ++k)
                atab[static_cast<std::size_t>(j) * (q + 1) + k] = a[std::abs(j - k)];
    }
    const int radius = params.truncate_spatial
                           ? static_cast<int>(std::ceil(3.0 * params.rho))
                           : std::max(rows, cols);
    std::vector<double> sp(2 * radius + 1);
    for (int d = -radius; d <= radius; ++d)
        sp[d + radius] = std::exp(-(static_cast<double>(d) * d) / (params.rho * params.rho));

    std::vector<double> cur(qs.levels.begin(), qs.levels.end());
    std::vector<double> next(cur.size());
    res.setup_seconds = seconds_since(t_setup);

    const auto t_iter = Clock::now();
    for (int step = 0; step < steps; ++step) {
        for (int r = 0; r < rows; ++r) {
            const int dy_lo = std::max(-radius, -r);
            const int dy_hi = std::min(radius, rows - 1 - r);
            for (int c = 0; c < cols; ++c) {
                const std::size_t i = static_cast<std::size_t>(r) * cols + c;
                const double* arow = &atab[static_cast<std::size_t>(qs.levels[i]) * (q + 1)];
                const int dx_lo = std::max(-radius, -c);
                const int dx_hi = std::min(radius, cols - 1 - c);
                double num = 0.0, den = 0.0;
                for (int dy = dy_lo; dy <= dy_hi; ++dy) {
                    const std::size_t base = static_cast<std::size_t>(r + dy) * cols + c;
                    const int* lrow = &qs.levels[base + dx_lo];
                    const double* srow = &cur[base + dx_lo];
                    const double* spx = &sp[radius + dx_lo];
                    double rnum = 0.0, rden = 0.0;
                    const int len = dx_hi - dx_lo + 1;
                    for (int x = 0; x < len; ++x) {
                        const double w = arow[lrow[x]] * spx[x];
                        rnum += w * srow[x];
                        rden += w;
                    }
                    const double wy = sp[radius + dy];
                    num += wy * rnum;
                    den += wy * rden;
                }
                next[i] = num / den;
            }
        }
        res.per_iter_change.push_back(relative_change(next, cur));
        ++res.iterations;
        cur.swap(next);
    }
    res.iter_seconds = seconds_since(t_iter);

    res.image = s0_image;
    res.image.values = std::move(cur);
    return res;
}

Tfr nlmeans(const Tfr& v, double h, double sigma_patch) {
    if (h <= 0.0 || sigma_patch <= 0.0)
        throw std::invalid_argument("nlmeans: h and sigma must be positive");
    if (v.values.empty()) throw std::invalid_argument("nlmeans: input has no real values");

    const int rows = v.rows, cols = v.cols;
    const int radius = static_cast<int>(std::ceil(3.0 * sigma_patch));
    const int side = 2 * radius + 1;

    // Unit-sum 2-D Gaussian patch weights.
    std::vector<double> g(static_cast<std::size_t>(side) * side);
    double gsum = 0.0;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx) {
            const double w = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma_patch * sigma_patch));
            g[static_cast<std::size_t>(dy + radius) * side + (dx + radius)] = w;
            gsum += w;
        }
    for (double& w : g) w /= gsum;

    // Patch distances become Euclidean distances of sqrt(G)-weighted vectors.
    auto reflect = [](int i, int n) {
        while (i < 0 || i >= n) {
            if (i < 0) i = -1 - i;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return i;
    };
    const std::size_t n = v.values.size();
    const std::size_t plen = g.size();
    std::vector<double> patches(n * plen);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            double* p = &patches[(static_cast<std::size_t>(r) * cols + c) * plen];
            std::size_t z = 0;
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx, ++z)
                    p[z] = std::sqrt(g[z]) *
                           v.at(reflect(r + dy, rows), reflect(c + dx, cols));
        }

    const double inv_h2 = 1.0 / (h * h);
    Tfr out = v;
    for (std::size_t x = 0; x < n; ++x) {
        const double* px = &patches[x * plen];
        double num = 0.0, den = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            const double* py = &patches[y * plen];
            double f = 0.0;
            for (std::size_t z = 0; z < plen; ++z) {
                const double d = px[z] - py[z];
                f += d * d;
            }
            const double w = std::exp(-f * inv_h2);
            num += w * v.values[y];
            den += w;
        }
        out.values[x] = num / den;
    }
    return out;
}

double f_correspondence(const Tfr& wv, double sigma_window_seconds, const Tfr& s,
                        int n_pairs, std::uint64_t seed) {
    if (wv.rows != s.rows || wv.cols != s.cols)
        throw std::invalid_argument("f_correspondence: grid shape mismatch");
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); };
    if (!close(wv.dt, s.dt) || !close(wv.df, s.df))
        throw std::invalid_argument("f_correspondence: grid axes mismatch");
    if (sigma_window_seconds <= 0.0)
        throw std::invalid_argument("f_correspondence: sigma must be positive");

    // The Wigner-Ville transform of a unit-norm Gaussian window of std sigma is
    // a 2-D Gaussian with time std sigma/sqrt(2) and frequency std 1/(2 sqrt(2) pi sigma).
    const double sigma_t = sigma_window_seconds / std::sqrt(2.0);
    const double sigma_f = 1.0 / (2.0 * std::sqrt(2.0) * M_PI * sigma_window_seconds);
    const Tfr smoothed = gaussian_smooth_tfr(wv, sigma_t, sigma_f);

    // Centered region of up to 64x64, away from the boundary.
    const int height = std::min(64, wv.rows);
    const int width = std::min(64, wv.cols);
    const int r0 = (wv.rows - height) / 2;
    const int c0 = (wv.cols - width) / 2;

    std::mt19937_64 rng(seed);
    auto pick = [&rng](int lo, int span) {
        return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(span));
    };

    double worst = 0.0;
    for (int i = 0; i < n_pairs; ++i) {
        const int rx = pick(r0, height), cx = pick(c0, width);
        const int ry = pick(r0, height), cy = pick(c0, width);
        const double f_wv = smoothed.at(rx, cx) - smoothed.at(ry, cy);
        const double f_tilde = f_wv * f_wv;
        const double ds = s.at(rx, cx) - s.at(ry, cy);
        const double dev = std::abs(f_tilde - ds * ds) / (1.0 + ds * ds);
        worst = std::max(worst, dev);
    }
    return worst;
}

double tv_functional(const Tfr& image, double eps_tilde) {
    const int rows = image.rows, cols = image.cols;
    double total = 0.0;
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const double dr = r + 1 < rows ? image.at(r + 1, c) - image.at(r, c) : 0.0;
            const double dc = c + 1 < cols ? image.at(r, c + 1) - image.at(r, c) : 0.0;
            total += std::sqrt(dr * dr + dc * dc + eps_tilde * eps_tilde);
        }
    return total;
}

namespace {

// y = x / dtau + grad^T diag(g) grad x  with forward differences and Neumann
// boundaries (differences across the boundary vanish).
void apply_tv_operator(const std::vector<double>& x, const std::vector<double>& g,
                       int rows, int cols, double dtau, std::vector<double>& y) {
    for (int r = 0; r < rows; ++r) {
        const std::size_t row = static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) {
            const std::size_t i = row + c;
            double acc = x[i] / dtau;
            if (r + 1 < rows) acc += g[i] * (x[i] - x[i + cols]);
            if (c + 1 < cols) acc += g[i] * (x[i] - x[i + 1]);
            if (r > 0) acc += g[i - cols] * (x[i] - x[i - cols]);
            if (c > 0) acc += g[i - 1] * (x[i] - x[i - 1]);
            y[i] = acc;
        }
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// Jacobi-preconditioned conjugate gradients; x holds the warm start on entry
// and the solution on exit.
void pcg_solve(const std::vector<double>& g, int rows, int cols, double dtau,
               const std::vector<double>& rhs, std::vector<double>& x,
               double rel_tol, int max_iter) {
    const std::size_t n = rhs.size();
    std::vector<double> diag(n);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            double d = 1.0 / dtau;
            if (r + 1 < rows) d += g[i];
            if (c + 1 < cols) d += g[i];
            if (r > 0) d += g[i - cols];
            if (c > 0) d += g[i - 1];
            diag[i] = d;
        }

    const double rhs_norm = std::sqrt(dot(rhs, rhs));
    if (rhs_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return;
    }
    const double target = rel_tol * rhs_norm;

    std::vector<double> r(n), z(n), p(n), q(n);
    apply_tv_operator(x, g, rows, cols, dtau, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
    for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
    p = z;
    double rz = dot(r, z);

    for (int it = 0; it < max_iter; ++it) {
        if (std::sqrt(dot(r, r)) <= target) return;
        apply_tv_operator(p, g, rows, cols, dtau, q);
        const double alpha = rz / dot(p, q);
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (std::size_t i = 0; i < n; ++i) r[i] -= alpha * q[i];
        for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
        const double rz_next = dot(r, z);
        const double beta = rz_next / rz;
        rz = rz_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    if (std::sqrt(dot(r, r)) > target)
        throw SolverError("tv_transport_denoise: conjugate gradients did not converge");
}

}  // namespace

FilterResult tv_transport_denoise(const Tfr& s0_image, const FilterParams& params) {
    require_image_in_range(s0_image, params.q_levels, "tv_transport_denoise");
    if (params.eps_tilde <= 0.0)
        throw std::invalid_argument("tv_transport_denoise: eps_tilde must be positive");
    if (params.dtau <= 0.0)
        throw std::invalid_argument("tv_transport_denoise: dtau must be positive");
    if (params.eps < 0.0)
        throw std::invalid_argument("tv_transport_denoise: eps must be nonnegative");

    const int steps = pde_step_count(params);
    const int rows = s0_image.rows, cols = s0_image.cols;
    const std::size_t n = s0_image.values.size();

    FilterResult res;
    const auto t_setup = Clock::now();

    // Transport field b = (eps/2) grad log(G_sigma * S0), floored before the log.
    std::vector<double> bx(n, 0.0), by(n, 0.0);
    bool has_transport = params.eps > 0.0;
    if (has_transport) {
        std::vector<double> smooth = s0_image.values;
        detail::smooth_pixels(smooth, rows, cols, params.sigma_smooth, params.sigma_smooth);
        const double floor = 1e-3 * params.q_levels;
        for (double& v : smooth) v = std::log(std::max(v, floor));
        auto reflect = [](int i, int nn) { return i < 0 ? 0 : (i >= nn ? nn - 1 : i); };
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const std::size_t i = static_cast<std::size_t>(r) * cols + c;
                const double dc = (smooth[static_cast<std::size_t>(r) * cols + reflect(c + 1, cols)] -
                                   smooth[static_cast<std::size_t>(r) * cols + reflect(c - 1, cols)]) / 2.0;
                const double dr = (smooth[static_cast<std::size_t>(reflect(r + 1, rows)) * cols + c] -
                                   smooth[static_cast<std::size_t>(reflect(r - 1, rows)) * cols + c]) / 2.0;
                bx[i] = 0.5 * params.eps * dc;
                by[i] = 0.5 * params.eps * dr;
            }
    }
    res.setup_seconds = seconds_since(t_setup);

    const auto t_iter = Clock::now();
    const int cg_max = static_cast<int>(std::ceil(10.0 * std::sqrt(static_cast<double>(n))));
    std::vector<double> cur = s0_image.values;
    std::vector<double> g(n), rhs(n), next(n);

    for (int step = 0; step < steps; ++step) {
        const double et2 = params.eps_tilde * params.eps_tilde;
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const std::size_t i = static_cast<std::size_t>(r) * cols + c;
                const double dr = r + 1 < rows ? cur[i + cols] - cur[i] : 0.0;
                const double dc = c + 1 < cols ? cur[i + 1] - cur[i] : 0.0;
                g[i] = 1.0 / std::sqrt(dr * dr + dc * dc + et2);
            }

        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                const std::size_t i = static_cast<std::size_t>(r) * cols + c;
                double conv = 0.0;
                if (has_transport) {
                    const double dxm = c > 0 ? cur[i] - cur[i - 1] : 0.0;
                    const double dxp = c + 1 < cols ? cur[i + 1] - cur[i] : 0.0;
                    const double dym = r > 0 ? cur[i] - cur[i - cols] : 0.0;
                    const double dyp = r + 1 < rows ? cur[i + cols] - cur[i] : 0.0;
                    conv = std::max(bx[i], 0.0) * dxm + std::min(bx[i], 0.0) * dxp +
                           std::max(by[i], 0.0) * dym + std::min(by[i], 0.0) * dyp;
                }
                rhs[i] = cur[i] / params.dtau - conv;
            }

        next = cur;  // warm start
        pcg_solve(g, rows, cols, params.dtau, rhs, next, 1e-8, cg_max);

        res.per_iter_change.push_back(relative_change(next, cur));
        ++res.iterations;
        cur.swap(next);
    }
    res.iter_seconds = seconds_since(t_iter);

    res.image = s0_image;
    res.image.values = std::move(cur);
    return res;
}

}  // namespace tfden
