#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "duokey/auth.hpp"

namespace duokey::store {

// Another record already holds this pattern.
class ConflictError : public Error {
 public:
  using Error::Error;
};

// The backing file cannot be opened, read or parsed.
class LoadError : public FormatError {
 public:
  using FormatError::FormatError;
};

// One JSON object per line, fields user_id, pattern, fingerprint, fp_params,
// created_at. Inserts append and fsync before returning.
std::string encode_record(const auth::UserRecord& record);
// Throws LoadError on malformed input.
auth::UserRecord decode_record(std::string_view line);

// Append-only user database keyed by pattern digest. Not internally
// synchronized: one writer at a time, as arranged by the owning service.
class UserStore {
 public:
  // Creates the file if absent. A torn final line (no trailing newline, does
  // not parse) is dropped by compacting; any other bad line is a LoadError
  // naming its line number.
  static UserStore open(const std::string& path);

  UserStore(UserStore&&) noexcept;
  UserStore& operator=(UserStore&&) noexcept;
  UserStore(const UserStore&) = delete;
  UserStore& operator=(const UserStore&) = delete;
  ~UserStore();

  // Throws ConflictError when the pattern is already present.
  void insert(const auth::UserRecord& record);
  std::optional<auth::UserRecord> find_by_pattern(const auth::GraphicalPattern& pattern) const;
  std::optional<auth::UserRecord> find_by_id(std::string_view user_id) const;
  // Insertion order.
  const std::vector<auth::UserRecord>& list() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  // Rewrites the file from memory through a temp file and rename.
  void compact();

  const std::string& path() const noexcept { return path_; }

 private:
  explicit UserStore(std::string path) : path_(std::move(path)) {}
  void open_for_append();

  std::string path_;
  int fd_ = -1;
  std::vector<auth::UserRecord> records_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace duokey::store
