#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <fstream>
#include <sstream>

#include "rvsc/gateway.hpp"

namespace rvsc::gateway {

nlohmann::json request_body(const ChatRequest &request, bool include_image_data) {
  nlohmann::ordered_json body;
  body["model"] = request.model;
  body["temperature"] = request.temperature;
  body["messages"] = nlohmann::ordered_json::array();
  for (const auto &m : request.messages) {
    nlohmann::ordered_json msg;
    msg["role"] = m.role;
    if (m.images.empty()) {
      msg["content"] = m.content;
    } else {
      auto parts = nlohmann::ordered_json::array();
      parts.push_back({{"type", "text"}, {"text", m.content}});
      for (const auto &img : m.images) {
        std::string url = include_image_data
                              ? "data:" + img.media_type + ";base64," + img.base64
                              : "data:" + img.media_type + ";base64,<" + std::to_string(img.base64.size()) + " chars>";
        parts.push_back({{"type", "image_url"}, {"image_url", {{"url", url}}}});
      }
      msg["content"] = std::move(parts);
    }
    body["messages"].push_back(std::move(msg));
  }
  return nlohmann::json::parse(body.dump());
}

void validate_config(const EndpointConfig &config) {
  if (config.base_url.empty()) throw std::invalid_argument("endpoint base_url is not set");
  if (config.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (config.timeout_seconds <= 0) throw std::invalid_argument("timeout must be positive");
}

EndpointConfig load_config(const std::optional<std::string> &path,
                           const std::function<std::optional<std::string>(const std::string &)> &env) {
  EndpointConfig c;
  if (path) {
    std::ifstream in(*path);
    if (!in) throw std::invalid_argument("cannot read config file '" + *path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
      throw std::invalid_argument("config file '" + *path + "' is not valid JSON: " + e.what());
    }
    try {
      if (j.contains("base_url")) c.base_url = j.at("base_url").get<std::string>();
      if (j.contains("api_key")) c.api_key = j.at("api_key").get<std::string>();
      if (j.contains("model")) c.model_name = j.at("model").get<std::string>();
      if (j.contains("temperature")) c.temperature = j.at("temperature").get<double>();
      if (j.contains("timeout")) c.timeout_seconds = j.at("timeout").get<int>();
      if (j.contains("max_retries")) c.max_retries = j.at("max_retries").get<int>();
    } catch (const nlohmann::json::exception &e) {
      throw std::invalid_argument("config file '" + *path + "': " + e.what());
    }
  }
  auto number = [](const std::string &name, const std::string &text) {
    try {
      std::size_t used = 0;
      double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception &) {
      throw std::invalid_argument(name + " must be a number");
    }
  };
  if (auto v = env("RVSC_BASE_URL")) c.base_url = *v;
  if (auto v = env("RVSC_API_KEY")) c.api_key = *v;
  if (auto v = env("RVSC_MODEL")) c.model_name = *v;
  if (auto v = env("RVSC_TEMPERATURE")) c.temperature = number("RVSC_TEMPERATURE", *v);
  if (auto v = env("RVSC_TIMEOUT")) c.timeout_seconds = static_cast<int>(number("RVSC_TIMEOUT", *v));
  if (auto v = env("RVSC_MAX_RETRIES")) c.max_retries = static_cast<int>(number("RVSC_MAX_RETRIES", *v));
  return c;
}

HttpTransport::HttpTransport(EndpointConfig config) : config_(std::move(config)) { validate_config(config_); }

std::string HttpTransport::complete(const ChatRequest &request) {
  // Split "scheme://host[:port]/prefix" into client origin and path prefix.
  const std::string &url = config_.base_url;
  std::size_t scheme_end = url.find("://");
  std::size_t path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
  std::string prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

  httplib::Client client(origin);
  if (!client.is_valid()) throw TransportError("invalid endpoint URL '" + url + "'");
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_write_timeout(config_.timeout_seconds, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  auto res = client.Post(prefix + "/chat/completions", headers, request_body(request).dump(), "application/json");
  if (!res) throw TransportError("request to " + origin + " failed: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw TransportError("endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 300));
  try {
    auto j = nlohmann::json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw TransportError(std::string("malformed chat completion response: ") + e.what());
  }
}

ScriptedTransport::ScriptedTransport(std::vector<std::string> responses)
    : responses_(responses.begin(), responses.end()) {}

std::string ScriptedTransport::complete(const ChatRequest &request) {
  requests_.push_back(request);
  if (responses_.empty()) throw TransportError("scripted transport has no responses left");
  std::string r = std::move(responses_.front());
  responses_.pop_front();
  return r;
}

std::string FailingTransport::complete(const ChatRequest &) {
  ++calls_;
  throw TransportError("network access is disabled");
}

}  // namespace rvsc::gateway
