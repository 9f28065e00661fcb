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

#ifndef ARENA_HTTP_API_H_
#define ARENA_HTTP_API_H_

#include <atomic>
#include <memory>
#include <string>

#include "arena/arena_service.h"

namespace httplib {
class Server;
}

namespace arena {

// JSON-over-HTTP front end of an ArenaService:
//   POST /matches, GET /matches, GET /matches/{id},
//   GET /matches/{id}/events (text/event-stream; resumable with ?from=N or
//   Last-Event-ID), POST /matches/{id}/input,
//   POST /evals, GET /evals, GET /evals/{id}, GET /evals/{id}/report,
//   GET /datasets.
class HttpApi {
 public:
  explicit HttpApi(ArenaService& service);
  ~HttpApi();
  HttpApi(const HttpApi&) = delete;
  HttpApi& operator=(const HttpApi&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws Error on failure.
  int bind(const std::string& host, int port);
  // Serves until stop(). Requires bind().
  void serve();
  void stop();

 private:
  void routes();

  ArenaService& service_;
  std::unique_ptr<httplib::Server> server_;
  std::atomic<bool> stopping_{false};
};

}  // namespace arena

#endif  // ARENA_HTTP_API_H_
