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

#include "arena/remote_agent.h"

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>

#include <nlohmann/json.hpp>

#include "arena/error.h"

namespace arena {

namespace {

constexpr std::size_t kMaxLineBytes = 1 << 20;

}  // namespace

Endpoint parse_endpoint(std::string_view text) {
  std::string_view rest = text;
  if (rest.starts_with("tcp://")) rest.remove_prefix(6);
  while (!rest.empty() && rest.back() == '/') rest.remove_suffix(1);
  const auto colon = rest.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == rest.size()) {
    throw Error("endpoint must look like host:port, got \"" + std::string(text) + "\"");
  }
  std::string_view host = rest.substr(0, colon);
  if (host.size() >= 2 && host.front() == '[' && host.back() == ']') {
    host = host.substr(1, host.size() - 2);
  }
  const auto port_text = rest.substr(colon + 1);
  unsigned port = 0;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc() || ptr != port_text.data() + port_text.size() || port == 0 ||
      port > 65535) {
    throw Error("bad port in endpoint \"" + std::string(text) + "\"");
  }
  return {std::string(host), static_cast<std::uint16_t>(port)};
}

std::string to_string(const Endpoint& endpoint) {
  return endpoint.host + ":" + std::to_string(endpoint.port);
}

RemoteMessage parse_remote_line(std::string_view line) {
  RemoteMessage m;
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    m.text = "not a JSON object";
    return m;
  }
  auto type = j.find("type");
  if (type == j.end() || !type->is_string()) {
    m.text = "missing \"type\"";
    return m;
  }
  const auto name = type->get<std::string>();
  if (name == "buzz") {
    double c = 1.0;
    if (auto it = j.find("confidence"); it != j.end()) {
      if (!it->is_number()) {
        m.text = "confidence is not a number";
        return m;
      }
      c = it->get<double>();
      if (std::isnan(c)) {
        m.text = "confidence is NaN";
        return m;
      }
    }
    m.kind = RemoteMessage::Kind::kBuzz;
    m.confidence = std::clamp(c, 0.0, 1.0);
    m.clamped = m.confidence != c;
  } else if (name == "answer") {
    auto it = j.find("text");
    if (it == j.end() || !it->is_string()) {
      m.text = "answer without string \"text\"";
      return m;
    }
    m.kind = RemoteMessage::Kind::kAnswer;
    m.text = it->get<std::string>();
  } else if (name == "pass") {
    m.kind = RemoteMessage::Kind::kPass;
  } else {
    m.kind = RemoteMessage::Kind::kUnknown;
    m.text = name;
  }
  return m;
}

RemoteAgent::RemoteAgent(Endpoint endpoint, RemoteDeadlines deadlines, Logger logger)
    : endpoint_(std::move(endpoint)), deadlines_(deadlines), logger_(std::move(logger)) {
  if (deadlines_.buzz_forward_ms < 0 || deadlines_.answer_ms <= 0) {
    throw Error("remote deadlines must be non-negative and answer_ms positive");
  }
}

RemoteAgent::~RemoteAgent() {
  if (fd_ >= 0) ::close(fd_);
}

void RemoteAgent::note(const std::string& message) {
  std::string line = "remote " + team_ + " (" + to_string(endpoint_) + "): " + message;
  {
    std::lock_guard lock(log_mu_);
    log_.push_back(line);
  }
  if (logger_) logger_(line);
}

std::vector<std::string> RemoteAgent::log() const {
  std::lock_guard lock(log_mu_);
  return log_;
}

void RemoteAgent::start(const std::string& team) {
  team_ = team;
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const auto port = std::to_string(endpoint_.port);
  if (int rc = ::getaddrinfo(endpoint_.host.c_str(), port.c_str(), &hints, &res); rc != 0) {
    throw Error("cannot resolve " + to_string(endpoint_) + ": " + ::gai_strerror(rc));
  }
  int fd = -1;
  int last_errno = 0;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) {
      last_errno = errno;
      continue;
    }
    if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    last_errno = errno;
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw Error("remote agent unreachable at " + to_string(endpoint_) + ": " +
                std::strerror(last_errno));
  }
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  fd_ = fd;
  silent_ = false;
  note("connected");
}

void RemoteAgent::finish() {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void RemoteAgent::go_silent(const std::string& why) {
  if (silent_) return;
  silent_ = true;
  granted_ = false;
  note("connection lost (" + why + "); silent for the rest of the match");
  finish();
}

bool RemoteAgent::send_line(const std::string& line) {
  std::string data = line + "\n";
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

RemoteAgent::ReadResult RemoteAgent::read_line(std::string& line,
                                               std::chrono::steady_clock::time_point deadline) {
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      line = buffer_.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      buffer_.erase(0, nl + 1);
      return ReadResult::kLine;
    }
    if (buffer_.size() > kMaxLineBytes) return ReadResult::kClosed;
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                          deadline - std::chrono::steady_clock::now())
                          .count();
    pollfd pfd{fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, static_cast<int>(std::max<std::int64_t>(0, left)));
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) return ReadResult::kClosed;
    if (rc == 0) return ReadResult::kTimeout;
    char chunk[4096];
    ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return ReadResult::kClosed;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void RemoteAgent::deliver(const AgentInbound& msg, std::vector<AgentOutbound>& out) {
  if (silent_ || fd_ < 0) return;
  if (!send_line(inbound_to_wire(msg).dump())) {
    go_silent("write failed");
    return;
  }
  enum class Want { kNothing, kBuzz, kAnswer } want = Want::kNothing;
  std::int64_t window = 0;
  if (std::holds_alternative<inbound::Token>(msg) || std::holds_alternative<inbound::ClueEnd>(msg)) {
    want = Want::kBuzz;
    window = deadlines_.buzz_forward_ms;
  } else if (std::holds_alternative<inbound::BuzzGranted>(msg)) {
    granted_ = true;
    want = Want::kAnswer;
    window = deadlines_.answer_ms;
  } else if (std::holds_alternative<inbound::RiddleEnd>(msg)) {
    granted_ = false;
  }

  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(window);
  for (bool waiting = true; waiting;) {
    std::string line;
    switch (read_line(line, deadline)) {
      case ReadResult::kTimeout:
        waiting = false;
        continue;
      case ReadResult::kClosed:
        go_silent("read failed or peer closed");
        return;
      case ReadResult::kLine:
        break;
    }
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const RemoteMessage m = parse_remote_line(line);
    switch (m.kind) {
      case RemoteMessage::Kind::kMalformed:
        note("dropped malformed line (" + m.text + "): " + line.substr(0, 200));
        break;
      case RemoteMessage::Kind::kUnknown:
        note("ignored unknown message type \"" + m.text + "\"");
        break;
      case RemoteMessage::Kind::kPass:
        if (want == Want::kBuzz) waiting = false;
        break;
      case RemoteMessage::Kind::kBuzz:
        if (m.clamped) note("buzz confidence out of range, clamped to " + std::to_string(m.confidence));
        out.push_back(outbound::BuzzRequest{m.confidence});
        if (want == Want::kBuzz) waiting = false;
        break;
      case RemoteMessage::Kind::kAnswer:
        if (!granted_) {
          note("protocol violation: answer before buzz_granted, dropped");
          break;
        }
        granted_ = false;
        out.push_back(outbound::AnswerSubmission{m.text});
        if (want == Want::kAnswer) waiting = false;
        break;
    }
  }
  if (want == Want::kAnswer && granted_) {
    granted_ = false;
    note("answer deadline expired; submitting empty answer");
    out.push_back(outbound::AnswerSubmission{""});
  }
}

}  // namespace arena
