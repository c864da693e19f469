#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "duokey/error.hpp"

namespace duokey::wav {

// RIFF/WAVE payload is not mono 16-bit little-endian PCM, or is malformed.
class AudioFormatError : public FormatError {
 public:
  using FormatError::FormatError;
};

struct PcmAudio {
  std::uint32_t sample_rate = 0;
  // Amplitudes in [-1, 1): int16 / 32768.
  std::vector<double> samples;
};

PcmAudio decode(std::span<const std::uint8_t> bytes);
// Mono, 16-bit. Samples are clamped to [-1, 1] and rounded.
std::vector<std::uint8_t> encode(std::span<const double> samples, std::uint32_t sample_rate);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

// Test signal standing in for a spoken word: a sine at `frequency_hz` under
// an |sin| envelope with `syllables` humps, so frame energies vary.
std::vector<double> synth_utterance(double frequency_hz, std::uint32_t duration_ms,
                                    std::uint32_t syllables, std::uint32_t sample_rate = 16000,
                                    double amplitude = 0.8);

}  // namespace duokey::wav
