#pragma once

#include <stdexcept>
#include <string>

namespace hgut {

/// Invalid argument to a library operation (out-of-range index, bad parameter).
struct ArgumentError : std::invalid_argument {
  explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// An operation that requires enumeration was asked to run past its size cap.
struct CapacityError : std::runtime_error {
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// Conditioning on a subcube that carries zero probability mass.
/// Raised loudly instead of falling back to a uniform sample: the testers are
/// designed never to hit this, and a silent fallback would hide the bug.
struct ZeroMassSubcubeError : std::runtime_error {
  explicit ZeroMassSubcubeError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration routed an input somewhere it cannot be handled
/// (e.g. base-case tester on a domain above its cap, sample count < 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Recursion depth cap exceeded; diagnostic, never expected under sane configs.
struct DepthExceededError : std::runtime_error {
  explicit DepthExceededError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hgut
