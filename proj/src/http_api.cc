// Copyright 2026 The Riddle Arena Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "arena/http_api.h"

#include <httplib.h>

#include <charconv>

#include "arena/error.h"

namespace arena {

namespace {

constexpr std::chrono::milliseconds kStreamPoll{250};

void send_json(httplib::Response& res, const nlohmann::json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

nlohmann::json parse_body(const httplib::Request& req) {
  auto j = nlohmann::json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw Error("request body is not valid JSON");
  return j;
}

std::optional<std::size_t> parse_index(const std::string& text) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return v;
}

// Runs `fn` and maps library errors onto status codes.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFound& ex) {
    send_json(res, {{"error", ex.what()}}, 404);
  } catch (const NotReady& ex) {
    send_json(res, {{"error", ex.what()}}, 409);
  } catch (const Error& ex) {
    send_json(res, {{"error", ex.what()}}, 400);
  } catch (const std::exception& ex) {
    send_json(res, {{"error", ex.what()}}, 500);
  }
}

}  // namespace

HttpApi::HttpApi(ArenaService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  server_->new_task_queue = [] { return new httplib::ThreadPool(32); };
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  routes();
}

HttpApi::~HttpApi() { stop(); }

int HttpApi::bind(const std::string& host, int port) {
  int bound = port == 0 ? server_->bind_to_any_port(host) : port;
  if (port != 0 && !server_->bind_to_port(host, port)) bound = -1;
  if (bound <= 0) throw Error("cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void HttpApi::serve() { server_->listen_after_bind(); }

void HttpApi::stop() {
  stopping_ = true;
  if (server_) server_->stop();
}

void HttpApi::routes() {
  auto& s = *server_;

  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, Last-Event-ID");
    res.status = 204;
  });

  s.Get("/", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, {{"service", "riddle-arena"},
                    {"endpoints",
                     {"POST /matches", "GET /matches", "GET /matches/{id}",
                      "GET /matches/{id}/events", "POST /matches/{id}/input", "POST /evals",
                      "GET /evals", "GET /evals/{id}", "GET /evals/{id}/report",
                      "GET /datasets"}}});
  });

  s.Post("/matches", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, service_.create_match(parse_body(req)), 201); });
  });
  s.Get("/matches", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, service_.list_matches()); });
  });
  s.Get(R"(/matches/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, service_.match_json(req.matches[1])); });
  });
  s.Post(R"(/matches/([^/]+)/input)", [this](const httplib::Request& req,
                                             httplib::Response& res) {
    guarded(res, [&] {
      const InputAck ack = service_.submit_input(req.matches[1], parse_body(req));
      nlohmann::json body = {{"accepted", ack.accepted}, {"seq", ack.seq}};
      body["reason"] = ack.reason.empty() ? nlohmann::json(nullptr) : nlohmann::json(ack.reason);
      send_json(res, body);
    });
  });
  s.Get(R"(/matches/([^/]+)/events)", [this](const httplib::Request& req,
                                             httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.matches[1];
      service_.match_json(id);
      std::size_t from = 0;
      if (req.has_param("from")) {
        auto v = parse_index(req.get_param_value("from"));
        if (!v) throw Error("bad \"from\" parameter");
        from = *v;
      } else if (req.has_header("Last-Event-ID")) {
        auto v = parse_index(req.get_header_value("Last-Event-ID"));
        if (!v) throw Error("bad Last-Event-ID header");
        from = *v + 1;
      }
      auto next = std::make_shared<std::size_t>(from);
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider(
          "text/event-stream", [this, id, next](std::size_t, httplib::DataSink& sink) {
            if (stopping_) return false;
            std::vector<std::string> lines;
            const bool done = service_.read_events(id, *next, lines, kStreamPoll);
            std::string chunk;
            for (const auto& line : lines) {
              chunk += "id: " + std::to_string((*next)++) + "\ndata: " + line + "\n\n";
            }
            if (chunk.empty() && !done) chunk = ": keep-alive\n\n";
            if (!chunk.empty() && !sink.write(chunk.data(), chunk.size())) return false;
            if (done) sink.done();
            return true;
          });
    });
  });

  s.Post("/evals", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, service_.start_eval(parse_body(req)), 202); });
  });
  s.Get("/evals", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, service_.list_evals()); });
  });
  s.Get(R"(/evals/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, service_.eval_json(req.matches[1])); });
  });
  s.Get(R"(/evals/([^/]+)/report)", [this](const httplib::Request& req,
                                           httplib::Response& res) {
    guarded(res, [&] { send_json(res, service_.eval_report(req.matches[1])); });
  });

  s.Get("/datasets", [this](const httplib::Request&, httplib::Response& res) {
    guarded(res, [&] { send_json(res, service_.datasets()); });
  });
}

}  // namespace arena
