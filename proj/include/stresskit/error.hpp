#pragma once

#include <stdexcept>
#include <string>

namespace stresskit {

class error : public std::runtime_error {
 public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Fatal input-format problems (bad header, unreadable file).
class format_error : public error {
 public:
  using error::error;
};

// Invalid run configuration / usage. The CLI maps this to exit code 2.
class config_error : public error {
 public:
  using error::error;
};

class train_error : public error {
 public:
  using error::error;
};

class eval_error : public error {
 public:
  using error::error;
};

class explain_error : public error {
 public:
  using error::error;
};

}  // namespace stresskit
