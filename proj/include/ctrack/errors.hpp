#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ctrack {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a tensor acquires non-finite entries.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Base for failures coming out of a denoiser backend. The sampler attaches
/// the reverse-step index before letting the error escape.
class DenoiserError : public std::runtime_error {
 public:
  explicit DenoiserError(std::string message, std::string endpoint = {})
      : std::runtime_error(message), message_(std::move(message)), endpoint_(std::move(endpoint)) {
    rebuild();
  }

  const char* what() const noexcept override { return full_.c_str(); }

  const std::string& message() const noexcept { return message_; }
  const std::string& endpoint() const noexcept { return endpoint_; }
  std::optional<int> step() const noexcept { return step_; }
  virtual bool retriable() const noexcept { return false; }

  void set_step(int step) {
    step_ = step;
    rebuild();
  }

 private:
  void rebuild() {
    full_ = message_;
    if (!endpoint_.empty()) full_ += " [endpoint " + endpoint_ + "]";
    if (step_) full_ += " [step " + std::to_string(*step_) + "]";
  }

  std::string message_;
  std::string endpoint_;
  std::optional<int> step_;
  std::string full_;
};

/// Network-level failure. Retrying may succeed.
class TransportError : public DenoiserError {
 public:
  using DenoiserError::DenoiserError;
  bool retriable() const noexcept override { return true; }
};

/// Malformed or version-incompatible exchange with a server. Not retriable.
class ProtocolError : public DenoiserError {
 public:
  using DenoiserError::DenoiserError;
};

}  // namespace ctrack
