#pragma once

// REST front end for ReviewService.
//
//   POST  /sessions
//   GET   /sessions/{id}
//   GET   /sessions/{id}/statements
//   PATCH /sessions/{id}/units/{unit_id}
//   PATCH /sessions/{id}/statements/{statement_id}/text
//   POST  /sessions/{id}/complete
//   GET   /sessions/{id}/report
//
// Errors are {"error": message} with 400, 404, 409 or 422.

#include <memory>
#include <string>

#include "gramtrans/session.hpp"

namespace httplib {
class Server;
}

namespace gramtrans {

class HttpService {
 public:
  explicit HttpService(ReviewService& service);
  ~HttpService();

  // Binds to `host`; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  ReviewService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace gramtrans
