#include "duokey/service.hpp"

#include "duokey/cipher.hpp"
#include "duokey/digest.hpp"
#include "duokey/hex.hpp"
#include "duokey/wav.hpp"

namespace duokey::service {

std::string SessionTable::issue(std::string user_id, Phase phase,
                                std::chrono::system_clock::time_point expires_at) {
  std::lock_guard lock(mutex_);
  std::string token;
  do {
    token = random_token_hex(16);
  } while (sessions_.contains(token));
  sessions_.emplace(token, Session{token, std::move(user_id), phase, expires_at});
  return token;
}

std::optional<Session> SessionTable::find(std::string_view token, Phase phase,
                                          std::chrono::system_clock::time_point now) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(std::string(token));
  if (it == sessions_.end() || it->second.phase != phase || it->second.expires_at <= now) {
    return std::nullopt;
  }
  return it->second;
}

std::optional<Session> SessionTable::take_challenge(std::string_view token,
                                                    std::chrono::system_clock::time_point now) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(std::string(token));
  if (it == sessions_.end() || it->second.phase != Phase::graphical_passed) return std::nullopt;
  Session s = std::move(it->second);
  sessions_.erase(it);
  if (s.expires_at <= now) return std::nullopt;
  return s;
}

void SessionTable::purge_expired(std::chrono::system_clock::time_point now) {
  std::lock_guard lock(mutex_);
  std::erase_if(sessions_, [&](const auto& kv) { return kv.second.expires_at <= now; });
}

std::size_t SessionTable::size() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

AuthService::AuthService(auth::PictureCatalog catalog, store::UserStore& users,
                         ServiceConfig config, Clock clock)
    : catalog_(std::move(catalog)), users_(users), config_(config), clock_(std::move(clock)) {
  config_.fingerprint.validate();
}

std::vector<CatalogEntry> AuthService::catalog() const {
  std::vector<CatalogEntry> out;
  for (const auto& p : catalog_.pictures()) out.push_back({p.picture_id, p.image_ref});
  return out;
}

std::string AuthService::signup(std::span<const std::string> selection,
                                std::span<const std::uint8_t> wav) {
  const auto audio = wav::decode(wav);
  const auto now = std::chrono::duration_cast<std::chrono::seconds>(clock_().time_since_epoch());
  auth::UserRecord record = auth::enroll(catalog_, selection, audio.samples, config_.fingerprint,
                                         now.count(), config_.allow_repeats);
  if (!config_.keep_raw_pattern) record.pattern.reset();
  std::lock_guard lock(users_mutex_);
  users_.insert(record);
  return record.user_id;
}

std::string AuthService::login_graphical(std::span<const std::string> selection) {
  const auth::GraphicalPattern pattern =
      auth::build_pattern(catalog_, selection, config_.allow_repeats);
  std::optional<auth::UserRecord> user;
  {
    std::lock_guard lock(users_mutex_);
    user = users_.find_by_pattern(pattern);
  }
  if (!user) throw Refused();
  const auto now = clock_();
  sessions_.purge_expired(now);
  return sessions_.issue(user->user_id, Phase::graphical_passed, now + config_.challenge_ttl);
}

std::string AuthService::login_voice(std::string_view challenge, std::span<const std::uint8_t> wav) {
  const auto now = clock_();
  const std::optional<Session> pending = sessions_.take_challenge(challenge, now);
  if (!pending) throw UnknownChallenge();

  std::optional<auth::UserRecord> user;
  {
    std::lock_guard lock(users_mutex_);
    user = users_.find_by_id(pending->user_id);
  }
  if (!user) throw Refused();

  // Undecodable or silent audio is a failed attempt like any other: the
  // challenge is already spent and the caller learns nothing more.
  try {
    const auto audio = wav::decode(wav);
    const auto fingerprint = auth::extract_fingerprint(audio.samples, user->fingerprint.params());
    if (!auth::match_fingerprint(user->fingerprint, fingerprint, config_.tau)) throw Refused();
  } catch (const Refused&) {
    throw;
  } catch (const Error&) {
    throw Refused();
  }
  return sessions_.issue(user->user_id, Phase::fully_authenticated, now + config_.session_ttl);
}

void AuthService::require_session(std::string_view token) {
  if (!sessions_.find(token, Phase::fully_authenticated, clock_())) throw Unauthorized();
}

std::string AuthService::encrypt(std::string_view session, std::string_view seed_a,
                                 std::string_view seed_b, std::string_view plaintext_hex) {
  require_session(session);
  const auto a = cipher::Seed10::parse(seed_a);
  const auto b = cipher::Seed10::parse(seed_b);
  const auto data = from_hex(plaintext_hex);
  return to_hex(cipher::encrypt_message(data, a, b));
}

std::string AuthService::decrypt(std::string_view session, std::string_view seed_a,
                                 std::string_view seed_b, std::string_view ciphertext_hex) {
  require_session(session);
  const auto a = cipher::Seed10::parse(seed_a);
  const auto b = cipher::Seed10::parse(seed_b);
  const auto data = from_hex(ciphertext_hex);
  return to_hex(cipher::decrypt_message(data, a, b));
}

}  // namespace duokey::service
