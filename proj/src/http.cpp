#include "http.hpp"

#include "httplib.h"

namespace scw::http {

namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw TransportError("url lacks a scheme: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw TransportError("unsupported url scheme: " + scheme);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (scheme == "https") throw TransportError("https endpoints need a build with OpenSSL");
#endif
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

nlohmann::json post_json(const std::string& url, const nlohmann::json& body, const std::string& bearer_token,
                         int timeout_seconds) {
  const SplitUrl target = split_url(url);
  httplib::Client client(target.origin);
  client.set_connection_timeout(timeout_seconds, 0);
  client.set_read_timeout(timeout_seconds, 0);
  client.set_write_timeout(timeout_seconds, 0);
  if (!bearer_token.empty()) client.set_bearer_token_auth(bearer_token);

  const auto result = client.Post(target.path, body.dump(), "application/json");
  if (!result) throw TransportError(url + ": " + httplib::to_string(result.error()));
  if (result->status < 200 || result->status >= 300) {
    throw TransportError(url + ": HTTP " + std::to_string(result->status));
  }
  try {
    return nlohmann::json::parse(result->body);
  } catch (const nlohmann::json::exception& e) {
    throw TransportError(url + ": reply is not JSON (" + e.what() + ")");
  }
}

}  // namespace scw::http
