#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gclkit {

/// Bad input parameters (counts, lengths, ranges, flags).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A motion produced cells with nonpositive volume or corner Jacobian.
class DegenerateMeshError : public std::runtime_error {
 public:
  DegenerateMeshError(const std::string& what, std::vector<std::size_t> cells)
      : std::runtime_error(what), cells_(std::move(cells)) {}
  const std::vector<std::size_t>& cells() const { return cells_; }

 private:
  std::vector<std::size_t> cells_;
};

class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, std::vector<std::size_t> indices)
      : std::runtime_error(what), indices_(std::move(indices)) {}
  const std::vector<std::size_t>& indices() const { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

}  // namespace gclkit
