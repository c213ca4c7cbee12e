#pragma once

#include <stdexcept>
#include <string>

namespace netgame {

// Thrown when an operation would exceed a configured size guard (e.g. the
// pure-Nash enumeration cap or the grid oracle's channel-count limit).
// Contract violations (bad indices, negative powers, malformed inputs) use
// std::invalid_argument instead.
class resource_limit_error : public std::runtime_error {
 public:
  explicit resource_limit_error(const std::string& what_arg)
      : std::runtime_error(what_arg) {}
};

}  // namespace netgame
