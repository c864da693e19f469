#include "duokey/auth.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "duokey/digest.hpp"

namespace duokey::auth {

PictureCatalog::PictureCatalog(std::vector<Picture> pictures) : pictures_(std::move(pictures)) {
  if (pictures_.size() < kSelectionLength || pictures_.size() > 256) {
    throw InvalidArgument("a catalog holds between 3 and 256 pictures, got " +
                          std::to_string(pictures_.size()));
  }
  std::set<std::string> ids;
  std::set<std::uint64_t> codes;
  for (const auto& p : pictures_) {
    if (p.picture_id.empty()) throw InvalidArgument("empty picture id");
    if (p.code.size() != 8) {
      throw InvalidArgument("picture " + p.picture_id + " needs an 8-bit code");
    }
    if (!ids.insert(p.picture_id).second) {
      throw InvalidArgument("duplicate picture id " + p.picture_id);
    }
    if (!codes.insert(p.code.to_uint()).second) {
      throw InvalidArgument("duplicate picture code " + p.code.str());
    }
  }
}

PictureCatalog PictureCatalog::generate(std::size_t count, std::uint64_t seed,
                                        std::string_view image_dir) {
  if (count > 256) throw InvalidArgument("at most 256 pictures fit the 8-bit code space");
  std::array<std::uint16_t, 256> codes{};
  std::iota(codes.begin(), codes.end(), std::uint16_t{0});
  // Fisher-Yates on raw mt19937_64 output; std::shuffle is not portable.
  std::mt19937_64 rng(seed);
  for (std::size_t i = codes.size() - 1; i > 0; --i) {
    std::swap(codes[i], codes[rng() % (i + 1)]);
  }
  const int width = count < 100 ? 2 : 3;
  std::vector<Picture> pictures;
  for (std::size_t i = 0; i < count; ++i) {
    std::ostringstream id;
    id << "pic-" << std::setw(width) << std::setfill('0') << (i + 1);
    std::string ref = std::string(image_dir) + "/" + id.str() + ".png";
    pictures.push_back({id.str(), std::move(ref), BitVec::from_uint(codes[i], 8)});
  }
  return PictureCatalog(std::move(pictures));
}

PictureCatalog PictureCatalog::parse_manifest(std::istream& in) {
  std::vector<Picture> pictures;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    Picture p;
    std::string code;
    std::string extra;
    if (!(fields >> p.picture_id >> p.image_ref >> code) || (fields >> extra)) {
      throw FormatError("catalog line " + std::to_string(line_no) +
                        ": expected 'picture_id image_ref code'");
    }
    try {
      p.code = BitVec::parse(code);
    } catch (const InvalidArgument& e) {
      throw FormatError("catalog line " + std::to_string(line_no) + ": " + e.what());
    }
    pictures.push_back(std::move(p));
  }
  try {
    return PictureCatalog(std::move(pictures));
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("catalog: ") + e.what());
  }
}

PictureCatalog PictureCatalog::load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read catalog " + path);
  return parse_manifest(in);
}

void PictureCatalog::write_manifest(std::ostream& out) const {
  out << "# picture_id image_ref code\n";
  for (const auto& p : pictures_) {
    out << p.picture_id << ' ' << p.image_ref << ' ' << p.code.str() << '\n';
  }
}

const Picture* PictureCatalog::find(std::string_view picture_id) const noexcept {
  auto it = std::find_if(pictures_.begin(), pictures_.end(),
                         [&](const Picture& p) { return p.picture_id == picture_id; });
  return it == pictures_.end() ? nullptr : &*it;
}

GraphicalPattern::GraphicalPattern(BitVec bits) : bits_(std::move(bits)) {
  if (bits_.size() != kWidth) {
    throw InvalidArgument("a pattern is 24 bits, got " + std::to_string(bits_.size()));
  }
}

GraphicalPattern build_pattern(const PictureCatalog& catalog,
                               std::span<const std::string> selection, bool allow_repeats) {
  if (selection.size() != kSelectionLength) {
    throw SelectionError("select exactly 3 pictures, got " + std::to_string(selection.size()));
  }
  if (!allow_repeats) {
    std::set<std::string_view> distinct(selection.begin(), selection.end());
    if (distinct.size() != selection.size()) {
      throw SelectionError("the same picture was selected twice");
    }
  }
  BitVec bits;
  for (const auto& id : selection) {
    const Picture* p = catalog.find(id);
    if (p == nullptr) throw UnknownPicture("unknown picture '" + id + "'");
    bits = concat(bits, p->code);
  }
  return GraphicalPattern(std::move(bits));
}

bool verify_pattern(const GraphicalPattern& stored, const GraphicalPattern& candidate) {
  return stored == candidate;
}

std::uint64_t selection_space(std::size_t catalog_size, bool allow_repeats) {
  const std::uint64_t n = catalog_size;
  if (allow_repeats) return n * n * n;
  if (n < kSelectionLength) return 0;
  return n * (n - 1) * (n - 2);
}

std::string pattern_digest(const GraphicalPattern& pattern) { return sha256_hex(pattern.str()); }

void FingerprintParams::validate() const {
  if (frames == 0) throw InvalidArgument("fingerprint needs at least one frame");
  if (bits_per_frame == 0 || bits_per_frame > 16) {
    throw InvalidArgument("bits per frame must be in 1..16");
  }
  if (length() > BitVec::kMaxLength) {
    throw InvalidArgument("fingerprint longer than " + std::to_string(BitVec::kMaxLength) +
                          " bits");
  }
  if (!(silence_threshold >= 0.0 && silence_threshold < 1.0)) {
    throw InvalidArgument("silence threshold must be in [0, 1)");
  }
}

VoiceFingerprint VoiceFingerprint::restore(BitVec bits, const FingerprintParams& params) {
  params.validate();
  if (bits.size() != params.length()) {
    throw InvalidArgument("fingerprint has " + std::to_string(bits.size()) + " bits, params say " +
                          std::to_string(params.length()));
  }
  return VoiceFingerprint(std::move(bits), params);
}

VoiceFingerprint extract_fingerprint(std::span<const double> samples,
                                     const FingerprintParams& params) {
  params.validate();
  if (samples.empty()) throw NoVoiceDetected();

  double peak = 0.0;
  for (double s : samples) {
    if (!std::isfinite(s)) throw InvalidArgument("non-finite audio sample");
    peak = std::max(peak, std::abs(s));
  }
  if (peak == 0.0) throw NoVoiceDetected();

  std::vector<double> level(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double a = std::abs(samples[i]);
    level[i] = params.normalize_peak ? a / peak : std::min(a, 1.0);
  }

  const auto audible = [&](double v) { return v >= params.silence_threshold; };
  const auto begin = std::find_if(level.begin(), level.end(), audible);
  const auto end = std::find_if(level.rbegin(), level.rend(), audible).base();
  if (begin >= end) throw NoVoiceDetected();

  const auto n = static_cast<std::size_t>(end - begin);
  const std::size_t frame_len = (n + params.frames - 1) / params.frames;
  const unsigned q = params.bits_per_frame;
  const std::uint64_t levels = std::uint64_t{1} << q;

  BitVec bits(params.length());
  for (std::size_t f = 0; f < params.frames; ++f) {
    const std::size_t lo = std::min(n, f * frame_len);
    const std::size_t hi = std::min(n, lo + frame_len);
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += begin[static_cast<std::ptrdiff_t>(i)];
    const double mean = sum / static_cast<double>(frame_len);
    const auto code = std::min(static_cast<std::uint64_t>(std::floor(mean * static_cast<double>(levels))),
                               levels - 1);
    for (unsigned b = 0; b < q; ++b) {
      bits.set(f * q + b, (code >> (q - 1 - b)) & 1u);
    }
  }
  return VoiceFingerprint(std::move(bits), params);
}

bool match_fingerprint(const VoiceFingerprint& a, const VoiceFingerprint& b, std::size_t tau) {
  if (!(a.params() == b.params())) {
    throw ParamsMismatch("fingerprints were extracted with different parameters");
  }
  return hamming_distance(a.bits(), b.bits()) <= tau;
}

UserRecord enroll(const PictureCatalog& catalog, std::span<const std::string> selection,
                  std::span<const double> samples, const FingerprintParams& params,
                  std::int64_t created_at, bool allow_repeats) {
  GraphicalPattern pattern = build_pattern(catalog, selection, allow_repeats);
  VoiceFingerprint fingerprint = extract_fingerprint(samples, params);
  std::string id = pattern_digest(pattern);
  return UserRecord{std::move(id), std::move(pattern), std::move(fingerprint), created_at};
}

std::string_view AuthDecision::message() const noexcept {
  switch (outcome) {
    case AuthOutcome::accepted:
      return "accepted";
    case AuthOutcome::graphical_failed:
      return "graphical factor failed";
    case AuthOutcome::voice_failed:
      return "voice factor failed";
  }
  return "unknown";
}

AuthDecision authenticate(const PictureCatalog& catalog, std::span<const std::string> selection,
                          std::span<const double> samples, const FingerprintParams& params,
                          const UserRecord& stored, std::size_t tau, bool allow_repeats) {
  const GraphicalPattern candidate = build_pattern(catalog, selection, allow_repeats);
  const bool pattern_ok = stored.pattern ? verify_pattern(*stored.pattern, candidate)
                                         : pattern_digest(candidate) == stored.user_id;
  if (!pattern_ok) return {AuthOutcome::graphical_failed};

  const VoiceFingerprint fingerprint = extract_fingerprint(samples, params);
  if (!match_fingerprint(stored.fingerprint, fingerprint, tau)) {
    return {AuthOutcome::voice_failed};
  }
  return {AuthOutcome::accepted};
}

}  // namespace duokey::auth
