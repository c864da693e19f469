#include "duokey/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace duokey::store {
namespace {

using nlohmann::json;

std::string system_error(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

void write_all(int fd, std::string_view data, const std::string& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw LoadError(system_error("write " + path));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

}  // namespace

std::string encode_record(const auth::UserRecord& record) {
  const auto& fp = record.fingerprint.params();
  json j = {
      {"user_id", record.user_id},
      {"pattern", record.pattern ? json(record.pattern->str()) : json(nullptr)},
      {"fingerprint", record.fingerprint.bits().str()},
      {"fp_params",
       {{"frames", fp.frames},
        {"bits_per_frame", fp.bits_per_frame},
        {"silence_threshold", fp.silence_threshold},
        {"normalize_peak", fp.normalize_peak}}},
      {"created_at", record.created_at},
  };
  return j.dump();
}

auth::UserRecord decode_record(std::string_view line) {
  try {
    const json j = json::parse(line);
    auth::FingerprintParams params;
    const json& p = j.at("fp_params");
    params.frames = p.at("frames").get<std::size_t>();
    params.bits_per_frame = p.at("bits_per_frame").get<unsigned>();
    params.silence_threshold = p.at("silence_threshold").get<double>();
    params.normalize_peak = p.at("normalize_peak").get<bool>();

    std::optional<auth::GraphicalPattern> pattern;
    if (!j.at("pattern").is_null()) {
      pattern = auth::GraphicalPattern::parse(j.at("pattern").get<std::string>());
    }
    auto fingerprint = auth::VoiceFingerprint::restore(
        BitVec::parse(j.at("fingerprint").get<std::string>()), params);
    auth::UserRecord record{j.at("user_id").get<std::string>(), std::move(pattern),
                            std::move(fingerprint), j.at("created_at").get<std::int64_t>()};
    if (record.pattern && auth::pattern_digest(*record.pattern) != record.user_id) {
      throw LoadError("user_id does not match pattern digest");
    }
    return record;
  } catch (const json::exception& e) {
    throw LoadError(e.what());
  } catch (const InvalidArgument& e) {
    throw LoadError(e.what());
  }
}

UserStore UserStore::open(const std::string& path) {
  UserStore store(path);
  std::string content;
  {
    std::ifstream in(path, std::ios::binary);
    if (in) {
      std::ostringstream buf;
      buf << in.rdbuf();
      content = buf.str();
    }
  }

  bool torn_tail = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const auto nl = content.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    const std::string_view line(content.data() + pos, (terminated ? nl : content.size()) - pos);
    pos = terminated ? nl + 1 : content.size();
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      auth::UserRecord rec = decode_record(line);
      if (store.by_id_.contains(rec.user_id)) {
        throw LoadError("duplicate pattern");
      }
      store.by_id_.emplace(rec.user_id, store.records_.size());
      store.records_.push_back(std::move(rec));
      if (!terminated) torn_tail = true;
    } catch (const LoadError& e) {
      if (!terminated) {
        // Crash during the last append; the record was never acknowledged.
        torn_tail = true;
        break;
      }
      throw LoadError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }

  if (torn_tail) {
    store.compact();
  } else {
    store.open_for_append();
  }
  return store;
}

UserStore::UserStore(UserStore&& other) noexcept
    : path_(std::move(other.path_)),
      fd_(std::exchange(other.fd_, -1)),
      records_(std::move(other.records_)),
      by_id_(std::move(other.by_id_)) {}

UserStore& UserStore::operator=(UserStore&& other) noexcept {
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    path_ = std::move(other.path_);
    fd_ = std::exchange(other.fd_, -1);
    records_ = std::move(other.records_);
    by_id_ = std::move(other.by_id_);
  }
  return *this;
}

UserStore::~UserStore() {
  if (fd_ >= 0) ::close(fd_);
}

void UserStore::open_for_append() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0600);
  if (fd_ < 0) throw LoadError(system_error("open " + path_));
}

void UserStore::insert(const auth::UserRecord& record) {
  if (by_id_.contains(record.user_id)) {
    throw ConflictError("pattern already enrolled");
  }
  write_all(fd_, encode_record(record) + "\n", path_);
  if (::fsync(fd_) != 0) throw LoadError(system_error("fsync " + path_));
  by_id_.emplace(record.user_id, records_.size());
  records_.push_back(record);
}

std::optional<auth::UserRecord> UserStore::find_by_pattern(
    const auth::GraphicalPattern& pattern) const {
  return find_by_id(auth::pattern_digest(pattern));
}

std::optional<auth::UserRecord> UserStore::find_by_id(std::string_view user_id) const {
  auto it = by_id_.find(std::string(user_id));
  if (it == by_id_.end()) return std::nullopt;
  return records_[it->second];
}

void UserStore::compact() {
  const std::string tmp = path_ + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600);
  if (fd < 0) throw LoadError(system_error("open " + tmp));
  std::string body;
  for (const auto& r : records_) body += encode_record(r) + "\n";
  try {
    write_all(fd, body, tmp);
  } catch (...) {
    ::close(fd);
    throw;
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) throw LoadError(system_error("fsync " + tmp));
  if (::rename(tmp.c_str(), path_.c_str()) != 0) throw LoadError(system_error("rename " + tmp));
  open_for_append();
}

}  // namespace duokey::store
