#include "tfden/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace tfden {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
    b.push_back(v & 0xff);
    b.push_back((v >> 8) & 0xff);
    b.push_back((v >> 16) & 0xff);
    b.push_back((v >> 24) & 0xff);
}

void put_u16(std::vector<unsigned char>& b, std::uint16_t v) {
    b.push_back(v & 0xff);
    b.push_back((v >> 8) & 0xff);
}

}  // namespace

Signal load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WavError(WavError::Code::MissingFile, "cannot open " + path);

    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw WavError(WavError::Code::BadHeader, path + ": not a RIFF/WAVE file");

    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    bool have_fmt = false;
    const unsigned char* data = nullptr;
    std::uint32_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t len = read_u32(bytes.data() + pos + 4);
        if (pos + 8 + len > bytes.size())
            throw WavError(WavError::Code::BadHeader, path + ": truncated chunk");
        const unsigned char* body = bytes.data() + pos + 8;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16) throw WavError(WavError::Code::BadHeader, path + ": short fmt chunk");
            format = read_u16(body);
            channels = read_u16(body + 2);
            rate = read_u32(body + 4);
            bits = read_u16(body + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = body;
            data_len = len;
        }
        pos += 8 + len + (len & 1);  // chunks are word-aligned
    }

    if (!have_fmt || data == nullptr)
        throw WavError(WavError::Code::BadHeader, path + ": missing fmt or data chunk");
    if (format != 1 || bits != 16)
        throw WavError(WavError::Code::UnsupportedEncoding,
                       path + ": only 16-bit PCM is supported");
    if (channels != 1 && channels != 2)
        throw WavError(WavError::Code::UnsupportedEncoding,
                       path + ": only mono or stereo is supported");
    if (rate == 0) throw WavError(WavError::Code::BadHeader, path + ": zero sample rate");

    const std::size_t frame_bytes = 2u * channels;
    const std::size_t n_frames = data_len / frame_bytes;
    if (n_frames == 0)
        throw WavError(WavError::Code::BadHeader, path + ": no audio samples");

    Signal out;
    out.sample_rate = static_cast<double>(rate);
    out.samples.resize(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (unsigned c = 0; c < channels; ++c) {
            const unsigned char* p = data + i * frame_bytes + 2 * c;
            const auto v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
            acc += static_cast<double>(v);
        }
        out.samples[i] = acc / channels / 32768.0;
    }
    return out;
}

void save_wav(const Signal& signal, const std::string& path) {
    const auto n = static_cast<std::uint32_t>(signal.samples.size());
    std::vector<unsigned char> b;
    b.reserve(44 + 2 * n);
    b.insert(b.end(), {'R', 'I', 'F', 'F'});
    put_u32(b, 36 + 2 * n);
    b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
    put_u32(b, 16);
    put_u16(b, 1);  // PCM
    put_u16(b, 1);  // mono
    const auto rate = static_cast<std::uint32_t>(std::lround(signal.sample_rate));
    put_u32(b, rate);
    put_u32(b, rate * 2);
    put_u16(b, 2);
    put_u16(b, 16);
    b.insert(b.end(), {'d', 'a', 't', 'a'});
    put_u32(b, 2 * n);
    for (double v : signal.samples) {
        const double clamped = std::clamp(v, -1.0, 1.0);
        const auto s = static_cast<std::int16_t>(std::lround(clamped * 32767.0));
        put_u16(b, static_cast<std::uint16_t>(s));
    }

    std::ofstream out(path, std::ios::binary);
    if (!out) throw WavError(WavError::Code::MissingFile, "cannot write " + path);
    out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

void save_signal_csv(const Signal& signal, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw WavError(WavError::Code::MissingFile, "cannot write " + path);
    char line[64];
    for (double v : signal.samples) {
        std::snprintf(line, sizeof(line), "%.12g\n", v);
        out << line;
    }
}

}  // namespace tfden
