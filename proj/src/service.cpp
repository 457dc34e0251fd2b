#include "gramtrans/service.hpp"

#include <httplib.h>

namespace gramtrans {

namespace {

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

// Runs `fn`, mapping errors to status codes.
template <class Fn>
void handle(httplib::Response& res, Fn&& fn) {
  try {
    reply(res, 200, fn());
  } catch (const ServiceError& e) {
    reply(res, e.status(), json{{"error", e.what()}});
  } catch (const json::exception& e) {
    reply(res, 400, json{{"error", e.what()}});
  } catch (const std::exception& e) {
    reply(res, 500, json{{"error", e.what()}});
  }
}

json parse_body(const httplib::Request& req) {
  try {
    return req.body.empty() ? json::object() : json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw ServiceError(400, std::string("malformed JSON body: ") + e.what());
  }
}

}  // namespace

HttpService::HttpService(ReviewService& service) : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto& s = *server_;
  s.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service_.create_session(parse_body(req)); });
  });
  s.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service_.session_summary(req.matches[1]); });
  });
  s.Get(R"(/sessions/([^/]+)/statements)", [this](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service_.statements(req.matches[1]); });
  });
  s.Patch(R"(/sessions/([^/]+)/units/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service_.patch_unit(req.matches[1], req.matches[2], parse_body(req)); });
  });
  s.Patch(R"(/sessions/([^/]+)/statements/([^/]+)/text)", [this](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service_.patch_text(req.matches[1], req.matches[2], parse_body(req)); });
  });
  s.Post(R"(/sessions/([^/]+)/complete)", [this](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service_.complete(req.matches[1]); });
  });
  s.Get(R"(/sessions/([^/]+)/report)", [this](const httplib::Request& req, httplib::Response& res) {
    handle(res, [&] { return service_.report(req.matches[1]); });
  });
}

HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  if (!server_->bind_to_port(host, port)) throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void HttpService::listen() { server_->listen_after_bind(); }

void HttpService::stop() { server_->stop(); }

}  // namespace gramtrans
