#include <thread>

#include <httplib.h>

#include "discoreward/error.hpp"
#include "discoreward/service.hpp"

namespace discoreward {

struct HttpServer::Impl {
  std::shared_ptr<const ScoreService> service;
  httplib::Server server;
  std::thread worker;
};

namespace {

void reply(httplib::Response& res, const HttpReply& r) {
  res.status = r.status;
  res.set_content(r.body, "application/json");
}

}  // namespace

HttpServer::HttpServer(std::shared_ptr<const ScoreService> service, std::size_t threads)
    : impl_(std::make_unique<Impl>()) {
  if (!service) throw Error(ErrorCode::kInvalidArgument, "HttpServer needs a service");
  impl_->service = std::move(service);
  const std::size_t pool = std::max<std::size_t>(1, threads);
  impl_->server.new_task_queue = [pool] { return new httplib::ThreadPool(pool); };

  const ScoreService* svc = impl_->service.get();
  impl_->server.Post("/v1/score", [svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc->handle_score(req.body));
  });
  impl_->server.Post("/v1/motifs", [svc](const httplib::Request& req, httplib::Response& res) {
    reply(res, svc->handle_motifs(req.body));
  });
  impl_->server.Get("/healthz", [svc](const httplib::Request&, httplib::Response& res) {
    reply(res, svc->handle_health());
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    port_ = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (port_ < 0) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void HttpServer::run(const std::string& host, int port) {
  port_ = port;
  if (!impl_->server.bind_to_port(host, port)) {
    throw Error(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace discoreward
