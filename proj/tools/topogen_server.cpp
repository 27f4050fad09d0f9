// Copyright 2026 The topogen Authors.
// SPDX-License-Identifier: Apache-2.0

// HTTP server for interactive sessions.
//   topogen-server --bind 127.0.0.1 --port 8080 [--snapshot-dir DIR]
// TOPOGEN_BIND, TOPOGEN_PORT and TOPOGEN_SNAPSHOT_DIR supply defaults.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "topogen/http.hpp"
#include "topogen/service.hpp"

namespace {

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topogen HTTP service", "topogen-server"};
  std::string bind = env_or("TOPOGEN_BIND", "127.0.0.1");
  int port = std::stoi(env_or("TOPOGEN_PORT", "8080"));
  std::string snapshot_dir = env_or("TOPOGEN_SNAPSHOT_DIR", "");
  std::size_t undo_depth = 100;
  app.add_option("--bind", bind, "address to listen on");
  app.add_option("--port", port, "TCP port");
  app.add_option("--snapshot-dir", snapshot_dir, "write a JSON snapshot of each session on mutation");
  app.add_option("--undo-depth", undo_depth, "undo steps kept per session");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  topogen::ServiceOptions opt;
  opt.undo_depth = undo_depth;
  if (!snapshot_dir.empty()) {
    std::filesystem::create_directories(snapshot_dir);
    opt.snapshot_dir = snapshot_dir;
  }
  topogen::Service service(opt);
  httplib::Server server;
  topogen::bind_routes(server, service);
  std::cout << "listening on " << bind << ":" << port << std::endl;
  if (!server.listen(bind, port)) {
    std::cerr << "cannot listen on " << bind << ":" << port << "\n";
    return 1;
  }
  return 0;
}
