#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "duokey/auth.hpp"
#include "duokey/store.hpp"

namespace duokey::service {

// A login factor did not match. Carries no detail on purpose: every refusal
// looks the same to the caller.
class Refused : public Error {
 public:
  Refused() : Error("refused") {}
};

// Confidentiality request without a fully authenticated session.
class Unauthorized : public Error {
 public:
  Unauthorized() : Error("unauthorized") {}
};

// Challenge token never issued, already used, or expired.
class UnknownChallenge : public Error {
 public:
  UnknownChallenge() : Error("unknown challenge") {}
};

using Clock = std::function<std::chrono::system_clock::time_point()>;

enum class Phase { graphical_passed, fully_authenticated };

struct Session {
  std::string token;  // 128-bit, lowercase hex
  std::string user_id;
  Phase phase;
  std::chrono::system_clock::time_point expires_at;
};

// Live challenges and sessions. Expired entries behave exactly like
// never-issued ones. All operations are atomic.
class SessionTable {
 public:
  std::string issue(std::string user_id, Phase phase, std::chrono::system_clock::time_point expires_at);
  // Live entry in `phase`, if any.
  std::optional<Session> find(std::string_view token, Phase phase,
                              std::chrono::system_clock::time_point now) const;
  // Removes and returns a live challenge: each challenge is usable once.
  std::optional<Session> take_challenge(std::string_view token,
                                        std::chrono::system_clock::time_point now);
  void purge_expired(std::chrono::system_clock::time_point now);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::string, Session> sessions_;
};

struct ServiceConfig {
  std::chrono::seconds session_ttl{15 * 60};
  std::chrono::seconds challenge_ttl{5 * 60};
  // Hamming tolerance for the voice factor; 0 is exact match.
  std::size_t tau = 0;
  auth::FingerprintParams fingerprint;
  // When false only the pattern digest is persisted.
  bool keep_raw_pattern = true;
  bool allow_repeats = false;
};

struct CatalogEntry {
  std::string picture_id;
  std::string image_ref;
};

// Transport-independent composition of the two login factors and the
// cipher. Audio arrives as RIFF/WAVE bytes.
class AuthService {
 public:
  AuthService(auth::PictureCatalog catalog, store::UserStore& users, ServiceConfig config = {},
              Clock clock = std::chrono::system_clock::now);

  // Picture ids and image refs only; codes stay on the server.
  std::vector<CatalogEntry> catalog() const;

  // Returns the new user_id. Throws SelectionError/UnknownPicture,
  // AudioFormatError/NoVoiceDetected, or ConflictError.
  std::string signup(std::span<const std::string> selection, std::span<const std::uint8_t> wav);

  // Returns a single-use challenge token, or throws Refused.
  std::string login_graphical(std::span<const std::string> selection);
  // Consumes the challenge whatever the outcome. Returns a session token, or
  // throws UnknownChallenge / Refused.
  std::string login_voice(std::string_view challenge, std::span<const std::uint8_t> wav);

  // Hex in, hex out. Throw Unauthorized without a live fully authenticated
  // session, InvalidArgument on malformed seeds or hex.
  std::string encrypt(std::string_view session, std::string_view seed_a, std::string_view seed_b,
                      std::string_view plaintext_hex);
  std::string decrypt(std::string_view session, std::string_view seed_a, std::string_view seed_b,
                      std::string_view ciphertext_hex);

  const SessionTable& sessions() const noexcept { return sessions_; }
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  void require_session(std::string_view token);

  auth::PictureCatalog catalog_;
  store::UserStore& users_;
  mutable std::mutex users_mutex_;
  ServiceConfig config_;
  Clock clock_;
  SessionTable sessions_;
};

}  // namespace duokey::service
