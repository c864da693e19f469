#include <httplib.h>

#include <json.hpp>

#include "duokey/http.hpp"
#include "duokey/wav.hpp"

namespace duokey::http {
namespace {

using nlohmann::json;

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& code,
                 const std::string& message) {
  reply(res, status, {{"error", code}, {"message", message}});
}

std::vector<std::string> parse_selection(const json& value) {
  if (!value.is_array()) throw InvalidArgument("selection must be an array of picture ids");
  std::vector<std::string> out;
  for (const auto& v : value) {
    if (!v.is_string()) throw InvalidArgument("selection must be an array of picture ids");
    out.push_back(v.get<std::string>());
  }
  return out;
}

json parse_body(const httplib::Request& req) {
  try {
    json body = json::parse(req.body);
    if (!body.is_object()) throw InvalidArgument("request body must be a JSON object");
    return body;
  } catch (const json::exception&) {
    throw InvalidArgument("request body is not valid JSON");
  }
}

std::string string_field(const json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end() || !it->is_string()) {
    throw InvalidArgument(std::string("missing string field '") + name + "'");
  }
  return it->get<std::string>();
}

std::string form_field(const httplib::Request& req, const char* name) {
  if (!req.has_file(name)) throw InvalidArgument(std::string("missing form field '") + name + "'");
  return req.get_file_value(name).content;
}

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

// Runs `fn`, translating library errors to status codes. Refusals are delayed
// to the configured floor.
template <class Fn>
void guarded(const ServerOptions& options, httplib::Response& res, Fn&& fn) {
  const auto started = std::chrono::steady_clock::now();
  try {
    fn();
  } catch (const service::Refused&) {
    std::this_thread::sleep_until(started + options.refusal_floor);
    reply_error(res, 401, "refused", "authentication refused");
  } catch (const service::Unauthorized&) {
    reply_error(res, 401, "unauthorized", "a fully authenticated session is required");
  } catch (const service::UnknownChallenge&) {
    reply_error(res, 404, "unknown_challenge", "unknown or expired challenge");
  } catch (const store::ConflictError&) {
    reply_error(res, 409, "conflict", "this picture sequence is already enrolled");
  } catch (const auth::NoVoiceDetected& e) {
    reply_error(res, 422, "bad_audio", e.what());
  } catch (const wav::AudioFormatError& e) {
    reply_error(res, 422, "bad_audio", e.what());
  } catch (const InvalidArgument& e) {
    reply_error(res, 400, "invalid_request", e.what());
  } catch (const std::exception&) {
    reply_error(res, 500, "internal", "internal error");
  }
}

}  // namespace

HttpServer::HttpServer(service::AuthService& service, ServerOptions options)
    : service_(service), options_(options), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::install_routes() {
  auto& srv = *server_;

  srv.Get("/catalog", [this](const httplib::Request&, httplib::Response& res) {
    guarded(options_, res, [&] {
      json pictures = json::array();
      for (const auto& e : service_.catalog()) {
        pictures.push_back({{"picture_id", e.picture_id}, {"image_ref", e.image_ref}});
      }
      reply(res, 200, {{"pictures", pictures}});
    });
  });

  srv.Post("/signup", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(options_, res, [&] {
      json selection;
      try {
        selection = json::parse(form_field(req, "selection"));
      } catch (const json::exception&) {
        throw InvalidArgument("selection must be a JSON array of picture ids");
      }
      const std::string audio = form_field(req, "audio");
      const std::string id = service_.signup(parse_selection(selection), as_bytes(audio));
      reply(res, 201, {{"user_id", id}});
    });
  });

  srv.Post("/login/graphical", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(options_, res, [&] {
      const json body = parse_body(req);
      if (!body.contains("selection")) throw InvalidArgument("missing field 'selection'");
      const std::string token = service_.login_graphical(parse_selection(body["selection"]));
      reply(res, 200, {{"challenge_token", token}});
    });
  });

  srv.Post("/login/voice", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(options_, res, [&] {
      const std::string challenge = form_field(req, "challenge_token");
      const std::string audio = form_field(req, "audio");
      const std::string token = service_.login_voice(challenge, as_bytes(audio));
      reply(res, 200, {{"session_token", token}});
    });
  });

  srv.Post("/encrypt", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(options_, res, [&] {
      const json body = parse_body(req);
      const std::string out =
          service_.encrypt(string_field(body, "session_token"), string_field(body, "seed_a"),
                           string_field(body, "seed_b"), string_field(body, "plaintext"));
      reply(res, 200, {{"ciphertext", out}});
    });
  });

  srv.Post("/decrypt", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(options_, res, [&] {
      const json body = parse_body(req);
      const std::string out =
          service_.decrypt(string_field(body, "session_token"), string_field(body, "seed_a"),
                           string_field(body, "seed_b"), string_field(body, "ciphertext"));
      reply(res, 200, {{"plaintext", out}});
    });
  });
}

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw NetworkError("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw NetworkError("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::run() { server_->listen_after_bind(); }

void HttpServer::start() {
  thread_ = std::thread([this] { run(); });
  server_->wait_until_ready();
}

void HttpServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace duokey::http
