#include <httplib.h>

#include <json.hpp>

#include "duokey/http.hpp"

namespace duokey::http {
namespace {

using nlohmann::json;

std::string to_string(std::span<const std::uint8_t> bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

json checked(const httplib::Result& result) {
  if (!result) {
    throw NetworkError("request failed: " + httplib::to_string(result.error()));
  }
  json body;
  try {
    body = json::parse(result->body);
  } catch (const json::exception&) {
    throw ApiError(result->status, "bad_response", "server sent a non-JSON body");
  }
  if (result->status < 200 || result->status >= 300) {
    throw ApiError(result->status, body.value("error", "error"),
                   body.value("message", "request failed"));
  }
  return body;
}

std::string field(const json& body, const char* name) {
  if (!body.contains(name) || !body[name].is_string()) {
    throw ApiError(200, "bad_response", std::string("response lacks '") + name + "'");
  }
  return body[name].get<std::string>();
}

}  // namespace

ApiClient::ApiClient(const std::string& base_url)
    : client_(std::make_unique<httplib::Client>(base_url)) {
  client_->set_connection_timeout(5);
  client_->set_read_timeout(30);
}

ApiClient::~ApiClient() = default;

std::vector<service::CatalogEntry> ApiClient::catalog() {
  const json body = checked(client_->Get("/catalog"));
  std::vector<service::CatalogEntry> out;
  for (const auto& p : body.at("pictures")) {
    out.push_back({p.at("picture_id").get<std::string>(), p.at("image_ref").get<std::string>()});
  }
  return out;
}

std::string ApiClient::signup(const std::vector<std::string>& selection,
                              std::span<const std::uint8_t> wav) {
  const httplib::MultipartFormDataItems items = {
      {"selection", json(selection).dump(), "", "application/json"},
      {"audio", to_string(wav), "voice.wav", "audio/wav"},
  };
  return field(checked(client_->Post("/signup", items)), "user_id");
}

std::string ApiClient::login_graphical(const std::vector<std::string>& selection) {
  const json body = {{"selection", selection}};
  return field(checked(client_->Post("/login/graphical", body.dump(), "application/json")),
               "challenge_token");
}

std::string ApiClient::login_voice(const std::string& challenge,
                                   std::span<const std::uint8_t> wav) {
  const httplib::MultipartFormDataItems items = {
      {"challenge_token", challenge, "", "text/plain"},
      {"audio", to_string(wav), "voice.wav", "audio/wav"},
  };
  return field(checked(client_->Post("/login/voice", items)), "session_token");
}

std::string ApiClient::encrypt(const std::string& session, const std::string& seed_a,
                               const std::string& seed_b, const std::string& plaintext_hex) {
  const json body = {{"session_token", session},
                     {"seed_a", seed_a},
                     {"seed_b", seed_b},
                     {"plaintext", plaintext_hex}};
  return field(checked(client_->Post("/encrypt", body.dump(), "application/json")), "ciphertext");
}

std::string ApiClient::decrypt(const std::string& session, const std::string& seed_a,
                               const std::string& seed_b, const std::string& ciphertext_hex) {
  const json body = {{"session_token", session},
                     {"seed_a", seed_a},
                     {"seed_b", seed_b},
                     {"ciphertext", ciphertext_hex}};
  return field(checked(client_->Post("/decrypt", body.dump(), "application/json")), "plaintext");
}

}  // namespace duokey::http
