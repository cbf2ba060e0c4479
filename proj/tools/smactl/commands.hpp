#pragma once

#include <ostream>
#include <string>

#include "smactl/settings.hpp"

namespace smactl {

// Each command returns its process exit code: 0 success, 1 check or
// runtime failure. Usage problems surface as sma::UsageError and are mapped
// to exit code 2 by the caller.
struct CommandIo {
  std::ostream& out;
  std::ostream& err;
};

// Keys the command needs beyond what the user supplies.
Settings command_defaults(const std::string& command);

int cmd_stability(Settings s, CommandIo io);
int cmd_expansion(Settings s, CommandIo io);
int cmd_bounds(const std::string& name, Settings s, bool json, CommandIo io);
int cmd_verify(const std::string& suite, Settings s, CommandIo io);
int cmd_datadep(Settings s, CommandIo io);

}  // namespace smactl
