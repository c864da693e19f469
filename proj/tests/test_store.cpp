#include <doctest.h>

#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "duokey/store.hpp"
#include "duokey/wav.hpp"
#include "support.hpp"

using namespace duokey;
using namespace duokey::auth;
using duokey::store::UserStore;

namespace {

FingerprintParams params() {
  FingerprintParams p;
  p.frames = 16;
  p.bits_per_frame = 4;
  return p;
}

UserRecord make_record(std::uint64_t seed, unsigned syllables, std::int64_t when) {
  const auto catalog = PictureCatalog::generate(12, seed);
  const auto& pics = catalog.pictures();
  const std::vector<std::string> sel{pics[0].picture_id, pics[1].picture_id, pics[2].picture_id};
  return enroll(catalog, sel, wav::synth_utterance(200.0, 400, syllables), params(), when);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary | std::ios::trunc) << text;
}

}  // namespace

TEST_CASE("record encoding") {
  const auto rec = make_record(1, 3, 1700000000);
  const auto line = store::encode_record(rec);
  CHECK(line.find('\n') == std::string::npos);
  const auto j = nlohmann::json::parse(line);
  CHECK(j.at("user_id") == rec.user_id);
  CHECK(j.at("pattern") == rec.pattern->str());
  CHECK(j.at("fingerprint").get<std::string>().size() == 64);
  CHECK(j.at("fp_params").at("frames") == 16);
  CHECK(j.at("fp_params").at("bits_per_frame") == 4);
  CHECK(j.at("created_at") == 1700000000);
  CHECK(store::decode_record(line) == rec);

  auto no_pattern = rec;
  no_pattern.pattern.reset();
  const auto j2 = nlohmann::json::parse(store::encode_record(no_pattern));
  CHECK(j2.at("pattern").is_null());
  CHECK(store::decode_record(store::encode_record(no_pattern)) == no_pattern);

  auto tampered = j;
  tampered["user_id"] = std::string(64, '0');
  CHECK_THROWS_AS(store::decode_record(tampered.dump()), store::LoadError);
  CHECK_THROWS_AS(store::decode_record("{}"), store::LoadError);
  CHECK_THROWS_AS(store::decode_record("not json"), store::LoadError);
}

TEST_CASE("insert and find") {
  testing::TempDir dir;
  auto db = UserStore::open(dir.file("users.jsonl"));
  CHECK(db.size() == 0);
  const auto a = make_record(1, 3, 10);
  const auto b = make_record(2, 4, 20);
  CHECK_FALSE(db.find_by_pattern(*a.pattern).has_value());
  db.insert(a);
  db.insert(b);
  CHECK(db.size() == 2);
  CHECK(db.find_by_pattern(*a.pattern) == a);
  CHECK(db.find_by_id(b.user_id) == b);
  CHECK_FALSE(db.find_by_id("nope").has_value());
  CHECK(db.list().front() == a);

  auto dup = make_record(1, 6, 30);
  CHECK_THROWS_AS(db.insert(dup), store::ConflictError);
  CHECK(db.size() == 2);
}

TEST_CASE("records survive reopening bit for bit") {
  testing::TempDir dir;
  const auto path = dir.file("users.jsonl");
  std::vector<UserRecord> written;
  {
    auto db = UserStore::open(path);
    for (std::uint64_t s = 0; s < 20; ++s) {
      written.push_back(make_record(s, 2 + s % 5, static_cast<std::int64_t>(s)));
      if (s % 3 == 0) written.back().pattern.reset();
      db.insert(written.back());
    }
  }
  const auto db = UserStore::open(path);
  REQUIRE(db.size() == written.size());
  for (std::size_t i = 0; i < written.size(); ++i) CHECK(db.list()[i] == written[i]);
  // Digest-only records are still found by pattern.
  const auto catalog = PictureCatalog::generate(12, 0);
  const auto& pics = catalog.pictures();
  const std::vector<std::string> sel{pics[0].picture_id, pics[1].picture_id, pics[2].picture_id};
  CHECK(db.find_by_pattern(build_pattern(catalog, sel)) == written[0]);
}

TEST_CASE("a torn final line is dropped on open") {
  testing::TempDir dir;
  const auto path = dir.file("users.jsonl");
  const auto a = make_record(1, 3, 1);
  const auto b = make_record(2, 3, 2);
  {
    auto db = UserStore::open(path);
    db.insert(a);
    db.insert(b);
  }
  const std::string full = slurp(path);
  spit(path, full.substr(0, full.size() - 20));
  {
    auto db = UserStore::open(path);
    CHECK(db.size() == 1);
    CHECK(db.list()[0] == a);
    db.insert(b);
  }
  CHECK(slurp(path) == full);
}

TEST_CASE("a corrupt line in the middle is an error naming the line") {
  testing::TempDir dir;
  const auto path = dir.file("users.jsonl");
  {
    auto db = UserStore::open(path);
    db.insert(make_record(1, 3, 1));
    db.insert(make_record(2, 3, 2));
  }
  const std::string text = slurp(path);
  const auto nl = text.find('\n');
  spit(path, text.substr(0, nl + 1) + "{garbage}\n" + text.substr(nl + 1));
  try {
    UserStore::open(path);
    FAIL("expected LoadError");
  } catch (const store::LoadError& e) {
    CHECK(std::string(e.what()).find(path + ":2") != std::string::npos);
  }
}

TEST_CASE("every crash prefix of the file reopens to a prefix of the records (property)") {
  testing::TempDir dir;
  const auto path = dir.file("users.jsonl");
  std::vector<UserRecord> written;
  {
    auto db = UserStore::open(path);
    for (std::uint64_t s = 0; s < 4; ++s) {
      written.push_back(make_record(s, 3, 0));
      db.insert(written.back());
    }
  }
  const std::string full = slurp(path);
  const auto probe = dir.file("probe.jsonl");
  for (std::size_t cut = 0; cut <= full.size(); ++cut) {
    const std::string prefix = full.substr(0, cut);
    spit(probe, prefix);
    const auto db = UserStore::open(probe);
    std::size_t complete = 0;
    for (char c : prefix) complete += c == '\n';
    // A record whose bytes all landed but whose newline did not is kept.
    if (cut > 0 && cut < full.size() && full[cut] == '\n') ++complete;
    REQUIRE(db.size() == complete);
    for (std::size_t i = 0; i < complete; ++i) REQUIRE(db.list()[i] == written[i]);
  }
}

TEST_CASE("compact rewrites the same content") {
  testing::TempDir dir;
  const auto path = dir.file("users.jsonl");
  auto db = UserStore::open(path);
  db.insert(make_record(1, 3, 1));
  db.insert(make_record(2, 3, 2));
  const std::string before = slurp(path);
  db.compact();
  CHECK(slurp(path) == before);
  db.insert(make_record(3, 3, 3));
  CHECK(UserStore::open(path).size() == 3);
}

TEST_CASE("open fails cleanly on an unreadable location") {
  CHECK_THROWS_AS(UserStore::open("/nonexistent-dir/users.jsonl"), store::LoadError);
}
