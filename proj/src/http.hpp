#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

namespace scw::http {

class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// POSTs a JSON body to an http(s) URL and parses the JSON reply. Non-2xx
/// statuses, connection failures and unparsable replies throw TransportError.
nlohmann::json post_json(const std::string& url, const nlohmann::json& body, const std::string& bearer_token,
                         int timeout_seconds);

}  // namespace scw::http
