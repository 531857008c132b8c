#pragma once

#include <string>

#include "diffsr/signal.hpp"

namespace diffsr {

enum class WavFormat { pcm16, float32 };

/// Reads a mono PCM16 or float32 WAV file. Multichannel or other encodings
/// are rejected.
Waveform read_wav(const std::string& path);

void write_wav(const std::string& path, const Waveform& w, WavFormat format = WavFormat::float32);

}  // namespace diffsr
