#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "duokey/service.hpp"

namespace httplib {
class Server;
class Client;
}  // namespace httplib

namespace duokey::http {

struct ServerOptions {
  // Refusals are held until at least this long after the request started.
  std::chrono::milliseconds refusal_floor{0};
};

// HTTP+JSON front end for AuthService. See docs/api.md for the wire format.
class HttpServer {
 public:
  explicit HttpServer(service::AuthService& service, ServerOptions options = {});
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  // run() on a background thread.
  void start();
  void stop();

 private:
  void install_routes();

  service::AuthService& service_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

// Non-2xx response. `code` is the "error" field of the body.
class ApiError : public Error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : Error(message), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

// The server could not be reached.
class NetworkError : public Error {
 public:
  using Error::Error;
};

class ApiClient {
 public:
  // e.g. "http://127.0.0.1:8080"
  explicit ApiClient(const std::string& base_url);
  ~ApiClient();
  ApiClient(const ApiClient&) = delete;
  ApiClient& operator=(const ApiClient&) = delete;

  std::vector<service::CatalogEntry> catalog();
  std::string signup(const std::vector<std::string>& selection, std::span<const std::uint8_t> wav);
  std::string login_graphical(const std::vector<std::string>& selection);
  std::string login_voice(const std::string& challenge, std::span<const std::uint8_t> wav);
  std::string encrypt(const std::string& session, const std::string& seed_a,
                      const std::string& seed_b, const std::string& plaintext_hex);
  std::string decrypt(const std::string& session, const std::string& seed_a,
                      const std::string& seed_b, const std::string& ciphertext_hex);

 private:
  std::unique_ptr<httplib::Client> client_;
};

}  // namespace duokey::http
