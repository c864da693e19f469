#include "duokey/wav.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <string_view>

namespace duokey::wav {
namespace {

std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

std::uint16_t le16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

bool tag(std::span<const std::uint8_t> b, std::size_t at, std::string_view name) {
  return std::equal(name.begin(), name.end(), b.begin() + static_cast<std::ptrdiff_t>(at),
                    [](char c, std::uint8_t v) { return static_cast<std::uint8_t>(c) == v; });
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, std::string_view name) {
  out.insert(out.end(), name.begin(), name.end());
}

}  // namespace

PcmAudio decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !tag(bytes, 0, "RIFF") || !tag(bytes, 8, "WAVE")) {
    throw AudioFormatError("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  PcmAudio audio;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = le32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (size > bytes.size() - body) throw AudioFormatError("truncated WAVE chunk");

    if (tag(bytes, pos, "fmt ")) {
      if (size < 16) throw AudioFormatError("short fmt chunk");
      const std::uint16_t format = le16(bytes, body);
      const std::uint16_t channels = le16(bytes, body + 2);
      const std::uint16_t bits = le16(bytes, body + 14);
      if (format != 1) throw AudioFormatError("WAVE data is not PCM");
      if (channels != 1) throw AudioFormatError("WAVE audio must be mono");
      if (bits != 16) throw AudioFormatError("WAVE audio must be 16-bit");
      audio.sample_rate = le32(bytes, body + 4);
      if (audio.sample_rate == 0) throw AudioFormatError("zero sample rate");
      have_fmt = true;
    } else if (tag(bytes, pos, "data")) {
      if (!have_fmt) throw AudioFormatError("data chunk before fmt chunk");
      if (size % 2 != 0) throw AudioFormatError("odd-sized 16-bit data chunk");
      audio.samples.reserve(size / 2);
      for (std::size_t i = body; i < body + size; i += 2) {
        audio.samples.push_back(static_cast<std::int16_t>(le16(bytes, i)) / 32768.0);
      }
      return audio;
    }
    // Chunks are word aligned.
    pos = body + size + (size & 1u);
  }
  throw AudioFormatError(have_fmt ? "WAVE file has no data chunk" : "WAVE file has no fmt chunk");
}

std::vector<std::uint8_t> encode(std::span<const double> samples, std::uint32_t sample_rate) {
  const auto data_size = static_cast<std::uint32_t>(samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  put_tag(out, "RIFF");
  put32(out, 36 + data_size);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, sample_rate);
  put32(out, sample_rate * 2);
  put16(out, 2);
  put16(out, 16);
  put_tag(out, "data");
  put32(out, data_size);
  for (double s : samples) {
    const double clamped = std::clamp(s, -1.0, 1.0);
    const auto v = static_cast<std::int16_t>(std::clamp(std::lround(clamped * 32768.0), -32768L, 32767L));
    put16(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write " + path);
}

std::vector<double> synth_utterance(double frequency_hz, std::uint32_t duration_ms,
                                    std::uint32_t syllables, std::uint32_t sample_rate,
                                    double amplitude) {
  const std::size_t n = static_cast<std::size_t>(sample_rate) * duration_ms / 1000;
  std::vector<double> out(n);
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    const double phase = static_cast<double>(i) / static_cast<double>(n);
    const double envelope = std::abs(std::sin(pi * syllables * phase));
    out[i] = amplitude * envelope * std::sin(2.0 * pi * frequency_hz * t);
  }
  return out;
}

}  // namespace duokey::wav
