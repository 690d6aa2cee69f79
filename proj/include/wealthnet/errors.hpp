#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wealthnet {

// Configuration / schema problems. CLI maps these to exit code 2.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during integration (overflow, singular implicit
// system). Carries the offending site where one can be attributed.
// CLI maps these to exit code 3.
class integration_error : public std::runtime_error {
 public:
  integration_error(const std::string& what, std::size_t site)
      : std::runtime_error(what + " (site " + std::to_string(site) + ")"),
        site_(site) {}
  explicit integration_error(const std::string& what)
      : std::runtime_error(what), site_(static_cast<std::size_t>(-1)) {}

  std::size_t site() const { return site_; }
  bool has_site() const { return site_ != static_cast<std::size_t>(-1); }

 private:
  std::size_t site_;
};

// Filesystem trouble while reading or writing artifacts. Exit code 4.
class io_error : public std::runtime_error {
 public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wealthnet
