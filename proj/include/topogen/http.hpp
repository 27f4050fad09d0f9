// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// Binds a Service to a cpp-httplib server.

#pragma once

#include <string>

// Eigen must come before httplib: <resolv.h> defines a `_res` macro.
#include "topogen/service.hpp"

#include <httplib.h>

namespace topogen {

inline Request to_request(const httplib::Request& in) {
  Request out;
  out.method = in.method;
  out.path = in.path;
  out.body = in.body;
  for (const auto& [k, v] : in.params) out.query[k] = v;
  return out;
}

inline void bind_routes(httplib::Server& server, Service& service) {
  auto handler = [&service](const httplib::Request& req, httplib::Response& res) {
    const Response r = service.handle(to_request(req));
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get(R"(/sessions.*)", handler);
  server.Post(R"(/sessions.*)", handler);
  server.Delete(R"(/sessions.*)", handler);
  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });
}

}  // namespace topogen
