#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rvsc/gateway.hpp"

namespace rvsc::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUsage = 2, kEndpoint = 3 };

struct Environment {
  std::function<std::optional<std::string>(const std::string &)> getenv;
  // Transport for extraction commands and `nl:` REPL lines.
  std::function<std::unique_ptr<gateway::Transport>(const gateway::EndpointConfig &)> make_transport;
};

// Process environment and HTTP transport.
Environment default_environment();

// args excludes the program name. Errors go to `err` as "error[<kind>]: ...".
int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err,
        const Environment &env = default_environment());

}  // namespace rvsc::cli
