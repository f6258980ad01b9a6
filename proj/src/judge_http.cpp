// HTTP transport for the judge, kept in its own translation unit so the
// rest of the library never pulls in cpp-httplib.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <cstdlib>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "unlearn_eval/errors.hpp"
#include "unlearn_eval/judge.hpp"

namespace uleval {

namespace {

using nlohmann::json;

struct ParsedUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw std::invalid_argument("endpoint URL needs a scheme: " + url);
    std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

// Accepts the common chat-completion response shapes.
std::string extract_text(const json& doc) {
    if (doc.contains("choices") && doc["choices"].is_array() &&
        !doc["choices"].empty()) {
        const json& choice = doc["choices"][0];
        if (choice.contains("message") && choice["message"].contains("content"))
            return choice["message"]["content"].get<std::string>();
        if (choice.contains("text")) return choice["text"].get<std::string>();
    }
    if (doc.contains("content") && doc["content"].is_string())
        return doc["content"].get<std::string>();
    if (doc.contains("text") && doc["text"].is_string())
        return doc["text"].get<std::string>();
    throw NetworkError("judge response has no recognizable text field");
}

class HttpTransport : public JudgeTransport {
  public:
    std::string complete(const std::string& prompt,
                         const JudgeConfig& config) override {
        ParsedUrl url = split_url(config.endpoint_url);
        httplib::Client client(url.origin);
        auto seconds = std::chrono::duration_cast<std::chrono::seconds>(
            config.timeout);
        client.set_read_timeout(seconds.count(), 0);
        client.set_connection_timeout(seconds.count(), 0);

        httplib::Headers headers;
        if (!config.api_key_env_var.empty()) {
            if (const char* key = std::getenv(config.api_key_env_var.c_str()))
                headers.emplace("Authorization", std::string("Bearer ") + key);
        }

        json body;
        body["model"] = config.model_name;
        body["temperature"] = config.temperature;
        body["messages"] = json::array(
            {{{"role", "user"}, {"content", prompt}}});

        auto result =
            client.Post(url.path, headers, body.dump(), "application/json");
        if (!result)
            throw NetworkError("request to " + config.endpoint_url +
                               " failed: " + httplib::to_string(result.error()));
        if (result->status < 200 || result->status >= 300)
            throw NetworkError("judge endpoint returned HTTP " +
                               std::to_string(result->status));
        json doc;
        try {
            doc = json::parse(result->body);
        } catch (const json::exception& e) {
            throw NetworkError(std::string("judge response is not JSON: ") +
                               e.what());
        }
        return extract_text(doc);
    }
};

}  // namespace

std::unique_ptr<JudgeTransport> make_http_transport() {
    return std::make_unique<HttpTransport>();
}

}  // namespace uleval
