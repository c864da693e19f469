#include "duokey/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "duokey/analysis.hpp"
#include "duokey/auth.hpp"
#include "duokey/cipher.hpp"
#include "duokey/hex.hpp"
#include "duokey/http.hpp"
#include "duokey/service.hpp"
#include "duokey/store.hpp"
#include "duokey/wav.hpp"

namespace duokey::cli {
namespace {

using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

template <class Bits>
Bits parse_bits(const std::string& text, const char* what) {
  try {
    return Bits::parse(text);
  } catch (const InvalidArgument&) {
    throw UsageError(std::string(what) + ": expected " + std::to_string(Bits::kWidth) +
                     " characters of 0/1, bit 1 first (e.g. " +
                     (Bits::kWidth == 10 ? "1010000010" : "10111101") + "), got '" + text + "'");
  }
}

std::vector<std::uint8_t> parse_hex(const std::string& text) {
  try {
    return from_hex(text);
  } catch (const InvalidArgument&) {
    throw UsageError("message: expected hexadecimal bytes, two digits each (e.g. 00ff10), got '" +
                     text + "'");
  }
}

std::vector<std::string> parse_pictures(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string id;
  while (std::getline(in, id, ',')) out.push_back(id);
  return out;
}

std::vector<cipher::KnownPair> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path);
  std::vector<cipher::KnownPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string p, c, extra;
    if (!(fields >> p)) continue;
    if (p[0] == '#') continue;
    if (!(fields >> c) || (fields >> extra)) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected '<plain8> <cipher8>'");
    }
    try {
      pairs.push_back({cipher::Block8::parse(p), cipher::Block8::parse(c)});
    } catch (const InvalidArgument& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (pairs.empty()) throw FormatError(path + ": no plaintext/ciphertext pairs");
  return pairs;
}

struct Options {
  bool json = false;

  // Positional arguments shared by several subcommands.
  std::string a, b, c;
  bool trace = false;

  std::string path;
  bool seed_space = false;
  unsigned workers = 0;

  std::size_t trials = 0;
  std::uint64_t seed = 0;

  auth::FingerprintParams fp;
  bool no_normalize = false;

  std::size_t count = auth::PictureCatalog::kDefaultSize;
  std::string images = "images";
  std::string out_path;

  double freq = 220.0;
  std::uint32_t ms = 1000;
  std::uint32_t syllables = 3;
  std::uint32_t rate = 16000;

  std::string store_path, catalog_path, host = "127.0.0.1";
  int port = 8080;
  std::size_t tau = 0;
  bool drop_raw = false;
  bool allow_repeats = false;
  unsigned refusal_floor_ms = 100;
  unsigned session_ttl_s = 15 * 60;

  std::string server = "http://127.0.0.1:8080";
  std::string pictures, audio, session;
};

void print_trace(std::ostream& out, const cipher::NetworkTrace& trace, bool as_json) {
  if (as_json) {
    json steps = json::array();
    for (const auto& [name, value] : trace.steps) steps.push_back({{"name", name}, {"value", value}});
    out << json{{"output", trace.output.str()}, {"trace", steps}}.dump() << '\n';
    return;
  }
  for (const auto& [name, value] : trace.steps) {
    out << std::left << std::setw(8) << name << value << '\n';
  }
}

int block_command(const Options& o, std::ostream& out, bool decrypt) {
  const auto block = parse_bits<cipher::Block8>(o.a, decrypt ? "ciphertext" : "plaintext");
  const auto k1 = parse_bits<cipher::RoundKey8>(o.b, "k1");
  const auto k2 = parse_bits<cipher::RoundKey8>(o.c, "k2");
  if (o.trace) {
    print_trace(out, decrypt ? cipher::trace_decrypt(block, k1, k2) : cipher::trace_encrypt(block, k1, k2),
                o.json);
    return kOk;
  }
  const auto result = decrypt ? cipher::decrypt_block(block, k1, k2) : cipher::encrypt_block(block, k1, k2);
  if (o.json) {
    out << json{{"output", result.str()}}.dump() << '\n';
  } else {
    out << result.str() << '\n';
  }
  return kOk;
}

int message_command(const Options& o, std::ostream& out, bool decrypt) {
  const auto data = parse_hex(o.a);
  const auto seed_a = parse_bits<cipher::Seed10>(o.b, "seedA");
  const auto seed_b = parse_bits<cipher::Seed10>(o.c, "seedB");
  const auto result = decrypt ? cipher::decrypt_message(data, seed_a, seed_b)
                              : cipher::encrypt_message(data, seed_a, seed_b);
  if (o.json) {
    out << json{{"output", to_hex(result)}}.dump() << '\n';
  } else {
    out << to_hex(result) << '\n';
  }
  return kOk;
}

int crack_command(const Options& o, std::ostream& out) {
  const auto pairs = read_pairs(o.path);
  const unsigned workers = o.workers ? o.workers : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::pair<std::string, std::string>> rows;
  if (o.seed_space) {
    for (const auto& [a, b] : cipher::brute_force_recover_seeds(pairs, cipher::CipherParams::standard(), workers)) {
      rows.emplace_back(a.str(), b.str());
    }
  } else {
    for (const auto& [k1, k2] : cipher::brute_force_recover(pairs, cipher::CipherParams::standard(), workers)) {
      rows.emplace_back(k1.str(), k2.str());
    }
  }
  if (o.json) {
    json candidates = json::array();
    for (const auto& [x, y] : rows) candidates.push_back({x, y});
    out << json{{"space", o.seed_space ? "seeds" : "round_keys"},
                {"count", rows.size()},
                {"candidates", candidates}}
               .dump()
        << '\n';
  } else {
    for (const auto& [x, y] : rows) out << x << ' ' << y << '\n';
  }
  return kOk;
}

int avalanche_command(const Options& o, std::ostream& out) {
  if (o.trials == 0) throw UsageError("--trials must be at least 1");
  const auto report = cipher::avalanche_report(o.trials, o.seed);
  if (o.json) {
    out << json{{"trials", report.trials}, {"mean", report.mean}, {"histogram", report.histogram}}.dump()
        << '\n';
    return kOk;
  }
  out << "trials " << report.trials << '\n';
  out << "mean " << std::fixed << std::setprecision(6) << report.mean << '\n';
  out << "histogram";
  for (auto n : report.histogram) out << ' ' << n;
  out << '\n';
  return kOk;
}

int fingerprint_command(const Options& o, std::ostream& out) {
  auto params = o.fp;
  params.normalize_peak = !o.no_normalize;
  const auto audio = wav::decode(wav::read_file(o.path));
  const auto fp = auth::extract_fingerprint(audio.samples, params);
  if (o.json) {
    out << json{{"fingerprint", fp.bits().str()},
                {"frames", params.frames},
                {"bits_per_frame", params.bits_per_frame},
                {"sample_rate", audio.sample_rate},
                {"samples", audio.samples.size()}}
               .dump()
        << '\n';
  } else {
    out << fp.bits().str() << '\n';
  }
  return kOk;
}

int catalog_command(const Options& o, std::ostream& out) {
  const auto catalog = auth::PictureCatalog::generate(o.count, o.seed, o.images);
  if (o.out_path.empty()) {
    catalog.write_manifest(out);
  } else {
    std::ofstream file(o.out_path);
    catalog.write_manifest(file);
    if (!file) throw Error("cannot write " + o.out_path);
  }
  return kOk;
}

int tone_command(const Options& o) {
  const auto samples = wav::synth_utterance(o.freq, o.ms, o.syllables, o.rate);
  wav::write_file(o.out_path, wav::encode(samples, o.rate));
  return kOk;
}

int serve_command(const Options& o, std::ostream& out) {
  auto catalog = auth::PictureCatalog::load_manifest(o.catalog_path);
  auto users = store::UserStore::open(o.store_path);
  service::ServiceConfig config;
  config.tau = o.tau;
  config.keep_raw_pattern = !o.drop_raw;
  config.allow_repeats = o.allow_repeats;
  config.session_ttl = std::chrono::seconds(o.session_ttl_s);
  service::AuthService svc(std::move(catalog), users, config);
  http::HttpServer server(svc, {std::chrono::milliseconds(o.refusal_floor_ms)});
  const int port = server.bind(o.host, o.port);
  out << "listening on http://" << o.host << ':' << port << std::endl;
  server.run();
  return kOk;
}

int client_command(const std::string& action, const Options& o, std::ostream& out) {
  http::ApiClient client(o.server);
  auto emit = [&](const char* key, const std::string& value) {
    if (o.json) {
      out << json{{key, value}}.dump() << '\n';
    } else {
      out << value << '\n';
    }
  };
  if (action == "catalog") {
    const auto entries = client.catalog();
    if (o.json) {
      json pictures = json::array();
      for (const auto& e : entries) pictures.push_back({{"picture_id", e.picture_id}, {"image_ref", e.image_ref}});
      out << json{{"pictures", pictures}}.dump() << '\n';
    } else {
      for (const auto& e : entries) out << e.picture_id << ' ' << e.image_ref << '\n';
    }
  } else if (action == "signup") {
    emit("user_id", client.signup(parse_pictures(o.pictures), wav::read_file(o.audio)));
  } else if (action == "login") {
    const std::string challenge = client.login_graphical(parse_pictures(o.pictures));
    emit("session_token", client.login_voice(challenge, wav::read_file(o.audio)));
  } else if (action == "encrypt" || action == "decrypt") {
    parse_bits<cipher::Seed10>(o.b, "seedA");
    parse_bits<cipher::Seed10>(o.c, "seedB");
    parse_hex(o.a);
    if (action == "encrypt") {
      emit("ciphertext", client.encrypt(o.session, o.b, o.c, o.a));
    } else {
      emit("plaintext", client.decrypt(o.session, o.b, o.c, o.a));
    }
  }
  return kOk;
}

int api_exit_code(const http::ApiError& e) {
  switch (e.status()) {
    case 401:
    case 404:
      return kRefused;
    case 409:
      return kConflict;
    case 400:
    case 422:
      return kBadInput;
    default:
      return kNetwork;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Two-factor picture/voice authentication and two-key block cipher", "duokey"};
  app.require_subcommand(1);
  app.add_flag("--json", o.json, "Machine-readable output");

  auto* keygen = app.add_subcommand("keygen", "Derive a round key from a 10-bit seed");
  keygen->add_option("seed", o.a, "10-bit seed, e.g. 1010000010")->required();

  auto* enc_block = app.add_subcommand("encrypt-block", "Encrypt one 8-bit block");
  auto* dec_block = app.add_subcommand("decrypt-block", "Decrypt one 8-bit block");
  for (auto* sub : {enc_block, dec_block}) {
    sub->add_option("block", o.a, "8-bit block")->required();
    sub->add_option("k1", o.b, "8-bit round key 1")->required();
    sub->add_option("k2", o.c, "8-bit round key 2")->required();
    sub->add_flag("--trace", o.trace, "Print every intermediate array");
  }

  auto* enc_msg = app.add_subcommand("encrypt-msg", "Encrypt hex bytes with two seeds");
  auto* dec_msg = app.add_subcommand("decrypt-msg", "Decrypt hex bytes with two seeds");
  for (auto* sub : {enc_msg, dec_msg}) {
    sub->add_option("hex", o.a, "Message bytes as hex")->required();
    sub->add_option("seedA", o.b, "10-bit seed for key 1")->required();
    sub->add_option("seedB", o.c, "10-bit seed for key 2")->required();
  }

  auto* crack = app.add_subcommand("crack", "Exhaustive known-plaintext key search");
  crack->add_option("pairs-file", o.path, "Lines of '<plain8> <cipher8>'")->required();
  crack->add_flag("--seed-space", o.seed_space, "Report seed pairs instead of round-key pairs");
  crack->add_option("--workers", o.workers, "Worker threads (default: hardware concurrency)");

  auto* avalanche = app.add_subcommand("avalanche", "Measure one-bit plaintext diffusion");
  avalanche->add_option("--trials", o.trials, "Number of random trials")->required();
  avalanche->add_option("--seed", o.seed, "Randomness seed");

  auto* fingerprint = app.add_subcommand("fingerprint", "Voice fingerprint of a WAV file");
  fingerprint->add_option("wav", o.path, "Mono 16-bit PCM WAV")->required();
  fingerprint->add_option("--frames", o.fp.frames, "Frame count F")->capture_default_str();
  fingerprint->add_option("--qbits", o.fp.bits_per_frame, "Bits per frame Q")->capture_default_str();
  fingerprint->add_option("--threshold", o.fp.silence_threshold, "Silence threshold")->capture_default_str();
  fingerprint->add_flag("--no-normalize", o.no_normalize, "Skip peak normalization");

  auto* catalog = app.add_subcommand("catalog", "Generate a picture catalog manifest");
  catalog->add_option("--count", o.count, "Number of pictures")->capture_default_str();
  catalog->add_option("--seed", o.seed, "Code assignment seed");
  catalog->add_option("--images", o.images, "Image directory")->capture_default_str();
  catalog->add_option("--out", o.out_path, "Write to file instead of stdout");

  auto* tone = app.add_subcommand("tone", "Write a synthetic utterance as WAV");
  tone->add_option("--freq", o.freq, "Carrier frequency in Hz")->capture_default_str();
  tone->add_option("--ms", o.ms, "Duration in milliseconds")->capture_default_str();
  tone->add_option("--syllables", o.syllables, "Envelope humps")->capture_default_str();
  tone->add_option("--rate", o.rate, "Sample rate")->capture_default_str();
  tone->add_option("--out", o.out_path, "Output WAV path")->required();

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--store", o.store_path, "User store (JSON lines)")->required();
  serve->add_option("--catalog", o.catalog_path, "Catalog manifest")->required();
  serve->add_option("--host", o.host, "Bind address")->capture_default_str();
  serve->add_option("--port", o.port, "Port, 0 for any free port")->capture_default_str();
  serve->add_option("--tau", o.tau, "Voice match tolerance in bits")->capture_default_str();
  serve->add_flag("--drop-raw-patterns", o.drop_raw, "Persist only pattern digests");
  serve->add_flag("--allow-repeats", o.allow_repeats, "Allow a picture twice in a selection");
  serve->add_option("--refusal-floor-ms", o.refusal_floor_ms, "Minimum refusal latency")->capture_default_str();
  serve->add_option("--session-ttl", o.session_ttl_s, "Session lifetime in seconds")->capture_default_str();

  auto* client = app.add_subcommand("client", "Talk to a running service");
  client->require_subcommand(1);
  client->add_option("--server", o.server, "Service base URL")->capture_default_str();
  auto* c_catalog = client->add_subcommand("catalog", "List pictures");
  auto* c_signup = client->add_subcommand("signup", "Enroll three pictures and a voice sample");
  auto* c_login = client->add_subcommand("login", "Two-phase login; prints a session token");
  for (auto* sub : {c_signup, c_login}) {
    sub->add_option("--pictures", o.pictures, "Comma-separated picture ids, in order")->required();
    sub->add_option("--audio", o.audio, "Voice sample WAV")->required();
  }
  auto* c_encrypt = client->add_subcommand("encrypt", "Encrypt hex through the service");
  auto* c_decrypt = client->add_subcommand("decrypt", "Decrypt hex through the service");
  for (auto* sub : {c_encrypt, c_decrypt}) {
    sub->add_option("--session", o.session, "Session token")->required();
    sub->add_option("hex", o.a, "Message bytes as hex")->required();
    sub->add_option("seedA", o.b, "10-bit seed for key 1")->required();
    sub->add_option("seedB", o.c, "10-bit seed for key 2")->required();
  }

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "duokey: " << e.what() << '\n';
    err << "Run with --help for usage.\n";
    return kUsage;
  }

  try {
    if (keygen->parsed()) {
      const auto key = cipher::derive_round_key(parse_bits<cipher::Seed10>(o.a, "seed"));
      if (o.json) {
        out << json{{"seed", o.a}, {"key", key.str()}}.dump() << '\n';
      } else {
        out << key.str() << '\n';
      }
      return kOk;
    }
    if (enc_block->parsed()) return block_command(o, out, false);
    if (dec_block->parsed()) return block_command(o, out, true);
    if (enc_msg->parsed()) return message_command(o, out, false);
    if (dec_msg->parsed()) return message_command(o, out, true);
    if (crack->parsed()) return crack_command(o, out);
    if (avalanche->parsed()) return avalanche_command(o, out);
    if (fingerprint->parsed()) return fingerprint_command(o, out);
    if (catalog->parsed()) return catalog_command(o, out);
    if (tone->parsed()) return tone_command(o);
    if (serve->parsed()) return serve_command(o, out);
    for (auto* sub : {c_catalog, c_signup, c_login, c_encrypt, c_decrypt}) {
      if (sub->parsed()) return client_command(sub->get_name(), o, out);
    }
  } catch (const UsageError& e) {
    err << "duokey: " << e.what() << '\n';
    return kUsage;
  } catch (const http::ApiError& e) {
    err << "duokey: server said " << e.status() << ' ' << e.code() << ": " << e.what() << '\n';
    return api_exit_code(e);
  } catch (const http::NetworkError& e) {
    err << "duokey: " << e.what() << '\n';
    return kNetwork;
  } catch (const auth::NoVoiceDetected& e) {
    err << "duokey: " << e.what() << '\n';
    return kBadInput;
  } catch (const FormatError& e) {
    err << "duokey: " << e.what() << '\n';
    return kBadInput;
  } catch (const InvalidArgument& e) {
    err << "duokey: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "duokey: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}

}  // namespace duokey::cli
