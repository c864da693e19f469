#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "duokey/bitvec.hpp"

namespace duokey::auth {

// A selection names a picture the catalog does not contain.
class UnknownPicture : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// Wrong number of pictures, or a repeat when repeats are not allowed.
class SelectionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// The audio normalizes or trims down to nothing.
class NoVoiceDetected : public Error {
 public:
  NoVoiceDetected() : Error("no voice detected") {}
};

// Two fingerprints extracted under different parameters were compared.
class ParamsMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct Picture {
  std::string picture_id;
  std::string image_ref;
  BitVec code;  // 8 bits, unique within a catalog
};

class PictureCatalog {
 public:
  static constexpr std::size_t kDefaultSize = 50;

  // Validates 3 <= N <= 256, 8-bit codes, distinct codes and ids.
  explicit PictureCatalog(std::vector<Picture> pictures);

  // N pictures "pic-01".. with distinct codes drawn deterministically from
  // `seed`, image refs "<image_dir>/<id>.png".
  static PictureCatalog generate(std::size_t count = kDefaultSize, std::uint64_t seed = 0,
                                 std::string_view image_dir = "images");

  // Manifest: one "picture_id image_ref code" record per line; blank lines
  // and lines starting with '#' are skipped. Throws FormatError naming the
  // offending line.
  static PictureCatalog parse_manifest(std::istream& in);
  static PictureCatalog load_manifest(const std::string& path);
  void write_manifest(std::ostream& out) const;

  const std::vector<Picture>& pictures() const noexcept { return pictures_; }
  std::size_t size() const noexcept { return pictures_.size(); }
  const Picture* find(std::string_view picture_id) const noexcept;

 private:
  std::vector<Picture> pictures_;
};

// The user's identity: three 8-bit picture codes concatenated in selection
// order.
class GraphicalPattern {
 public:
  static constexpr std::size_t kWidth = 24;

  explicit GraphicalPattern(BitVec bits);
  static GraphicalPattern parse(std::string_view text) { return GraphicalPattern(BitVec::parse(text)); }

  const BitVec& bits() const noexcept { return bits_; }
  std::string str() const { return bits_.str(); }

  friend bool operator==(const GraphicalPattern&, const GraphicalPattern&) = default;

 private:
  BitVec bits_;
};

constexpr std::size_t kSelectionLength = 3;

GraphicalPattern build_pattern(const PictureCatalog& catalog,
                               std::span<const std::string> selection,
                               bool allow_repeats = false);
bool verify_pattern(const GraphicalPattern& stored, const GraphicalPattern& candidate);

// Ordered selections a guesser must cover: N(N-1)(N-2), or N^3 with repeats.
std::uint64_t selection_space(std::size_t catalog_size, bool allow_repeats = false);

// Stable identifier of a pattern: hex SHA-256 of its bit string.
std::string pattern_digest(const GraphicalPattern& pattern);

struct FingerprintParams {
  std::size_t frames = 256;
  unsigned bits_per_frame = 8;
  // Fraction of full scale, applied after normalization.
  double silence_threshold = 0.02;
  bool normalize_peak = true;

  // Throws InvalidArgument when out of range.
  void validate() const;
  std::size_t length() const noexcept { return frames * bits_per_frame; }

  friend bool operator==(const FingerprintParams&, const FingerprintParams&) = default;
};

class VoiceFingerprint {
 public:
  // Rebuilds a persisted fingerprint; checks length against params.
  static VoiceFingerprint restore(BitVec bits, const FingerprintParams& params);

  const BitVec& bits() const noexcept { return bits_; }
  const FingerprintParams& params() const noexcept { return params_; }

  friend bool operator==(const VoiceFingerprint&, const VoiceFingerprint&) = default;

 private:
  friend VoiceFingerprint extract_fingerprint(std::span<const double>, const FingerprintParams&);
  VoiceFingerprint(BitVec bits, FingerprintParams params)
      : bits_(std::move(bits)), params_(params) {}

  BitVec bits_;
  FingerprintParams params_;
};

// Normalize to peak 1, trim leading/trailing samples quieter than the
// threshold, cut into `frames` equal frames (the last zero-padded), take each
// frame's mean |amplitude| m and quantize it to min(floor(m * 2^Q), 2^Q - 1)
// on Q bits. Throws NoVoiceDetected when nothing audible remains.
VoiceFingerprint extract_fingerprint(std::span<const double> samples,
                                     const FingerprintParams& params = {});

// Hamming distance <= tau. Throws ParamsMismatch when params differ.
bool match_fingerprint(const VoiceFingerprint& a, const VoiceFingerprint& b, std::size_t tau = 0);

struct UserRecord {
  std::string user_id;  // pattern_digest(pattern)
  // Empty when the deployment keeps only the digest.
  std::optional<GraphicalPattern> pattern;
  VoiceFingerprint fingerprint;
  std::int64_t created_at = 0;  // UTC seconds since epoch

  friend bool operator==(const UserRecord&, const UserRecord&) = default;
};

UserRecord enroll(const PictureCatalog& catalog, std::span<const std::string> selection,
                  std::span<const double> samples, const FingerprintParams& params,
                  std::int64_t created_at, bool allow_repeats = false);

enum class AuthOutcome { accepted, graphical_failed, voice_failed };

struct AuthDecision {
  AuthOutcome outcome;

  bool accepted() const noexcept { return outcome == AuthOutcome::accepted; }
  // "accepted", "graphical factor failed" or "voice factor failed".
  std::string_view message() const noexcept;
};

// Graphical factor first; the voice sample is only processed once the
// pattern matches.
AuthDecision authenticate(const PictureCatalog& catalog, std::span<const std::string> selection,
                          std::span<const double> samples, const FingerprintParams& params,
                          const UserRecord& stored, std::size_t tau = 0,
                          bool allow_repeats = false);

}  // namespace duokey::auth
