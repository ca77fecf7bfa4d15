#pragma once

#include <stdexcept>
#include <string>

#include "tfden/signal.hpp"

namespace tfden {

struct WavError : std::runtime_error {
    enum class Code { MissingFile, BadHeader, UnsupportedEncoding };
    Code code;
    WavError(Code c, const std::string& what)
        : std::runtime_error(what), code(c) {}
};

/// Reads a 16-bit PCM RIFF/WAVE file. Stereo is averaged to mono; samples are
/// mapped to [-1, 1] by dividing by 32768.
Signal load_wav(const std::string& path);

/// Writes mono 16-bit PCM. Samples are clamped to [-1, 1] and rounded.
void save_wav(const Signal& signal, const std::string& path);

/// One sample per line, decimal text.
void save_signal_csv(const Signal& signal, const std::string& path);

}  // namespace tfden
