#ifndef RINGTRAP_ERRORS_HPP
#define RINGTRAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ringtrap {

// Config file rejected; carries the offending line and key when known.
struct ConfigParseError : std::runtime_error {
  int line = 0;
  std::string key;
  ConfigParseError(int line_, std::string key_, const std::string& msg)
      : std::runtime_error("config line " + std::to_string(line_) +
                           (key_.empty() ? "" : " (key '" + key_ + "')") + ": " + msg),
        line(line_), key(std::move(key_)) {}
};

// Energy minimization did not reach the force threshold.
struct ConvergenceError : std::runtime_error {
  double residual_force = 0; // best max |F| reached, N
  explicit ConvergenceError(const std::string& msg, double residual)
      : std::runtime_error(msg), residual_force(residual) {}
};

// MD step produced non-finite state or an invalid rate; carries a state dump.
struct IntegrationError : std::runtime_error {
  std::string dump;
  IntegrationError(const std::string& msg, std::string dump_)
      : std::runtime_error(msg), dump(std::move(dump_)) {}
};

} // namespace ringtrap

#endif
