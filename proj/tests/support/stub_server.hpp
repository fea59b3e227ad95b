// stub_server.hpp - in-process chat-completion doubles for harness tests.
#ifndef TVL_TESTS_STUB_SERVER_HPP
#define TVL_TESTS_STUB_SERVER_HPP

#include <atomic>
#include <functional>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace testutil {

// Wraps an httplib server on an ephemeral port. The completion handler maps
// the last user message (the target question) to (status, completion text).
class StubServer {
public:
    struct Reply {
        int status = 200;
        std::string content;
    };
    using CompletionHandler = std::function<Reply(const std::string& question)>;

    explicit StubServer(CompletionHandler handler) : handler_(std::move(handler)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                    httplib::Response& res) {
            ++requests_;
            auto body = nlohmann::json::parse(req.body);
            std::string question;
            for (const auto& m : body.at("messages"))
                if (m.at("role") == "user") question = m.at("content").get<std::string>();
            Reply reply = handler_(question);
            res.status = reply.status;
            if (reply.status == 200) {
                nlohmann::json out = {
                    {"choices",
                     {{{"message", {{"role", "assistant"}, {"content", reply.content}}}}}}};
                res.set_content(out.dump(), "application/json");
            } else {
                res.set_content("{\"error\":\"stub\"}", "application/json");
            }
        });
        server_.Post("/v1/embeddings", [this](const httplib::Request& req,
                                              httplib::Response& res) {
            ++requests_;
            auto body = nlohmann::json::parse(req.body);
            nlohmann::json data = nlohmann::json::array();
            size_t index = 0;
            for (const auto& input : body.at("input")) {
                // deterministic toy embedding: letter histogram
                std::vector<double> vec(26, 0.0);
                for (char ch : input.get<std::string>()) {
                    if (std::isalpha(static_cast<unsigned char>(ch)))
                        vec[static_cast<size_t>(std::tolower(static_cast<unsigned char>(ch)) -
                                                'a')] += 1.0;
                }
                data.push_back({{"index", index++}, {"embedding", vec}});
            }
            res.set_content(nlohmann::json{{"data", data}}.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubServer() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    size_t requests() const { return requests_.load(); }

private:
    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    CompletionHandler handler_;
    std::atomic<size_t> requests_{0};
};

}  // namespace testutil

#endif  // TVL_TESTS_STUB_SERVER_HPP
