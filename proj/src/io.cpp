#include "tfden/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace tfden {

void write_pgm(const Tfr& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << image.cols << " " << image.rows << "\n255\n";
    std::vector<unsigned char> row(image.cols);
    // Highest frequency on top.
    for (int r = image.rows - 1; r >= 0; --r) {
        for (int c = 0; c < image.cols; ++c) {
            const double v = std::clamp(image.at(r, c), 0.0, 255.0);
            row[c] = static_cast<unsigned char>(std::lround(v));
        }
        out.write(reinterpret_cast<const char*>(row.data()), image.cols);
    }
}

void write_matrix_csv(const Tfr& tfr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "# kind=%s rows=%d cols=%d dt=%.12g df=%.12g\n",
                  tfr_kind_name(tfr.kind), tfr.rows, tfr.cols, tfr.dt, tfr.df);
    out << buf;
    for (int r = 0; r < tfr.rows; ++r) {
        for (int c = 0; c < tfr.cols; ++c) {
            std::snprintf(buf, sizeof(buf), c + 1 < tfr.cols ? "%.10g," : "%.10g\n",
                          tfr.at(r, c));
            out << buf;
        }
    }
}

void write_iftrack_csv(const IfTrack& track, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "t,n,freq_hz,intensity\n";
    char buf[128];
    for (const IfPoint& p : track.points) {
        std::snprintf(buf, sizeof(buf), "%.10g,%d,%.10g,%.10g\n", p.t, p.component,
                      p.freq_hz, p.intensity);
        out << buf;
    }
}

void write_profile_csv(const EnergyProfile& profile, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "t,energy\n";
    char buf[80];
    for (std::size_t i = 0; i < profile.t.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g\n", profile.t[i], profile.energy[i]);
        out << buf;
    }
}

}  // namespace tfden
