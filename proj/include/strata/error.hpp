#pragma once

#include <stdexcept>
#include <string>

namespace strata {

// Recoverable input/API misuse: bad event files, duplicate edges, unknown ids, bad config.
class error : public std::runtime_error {
  public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Broken internal invariant.  Not meant to be caught except at the process boundary;
// indicates a bug rather than bad input.
class internal_error : public std::logic_error {
  public:
    explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

#define STRATA_CHECK(cond, msg)                                                      \
    do {                                                                             \
        if (!(cond))                                                                 \
            throw ::strata::internal_error(std::string("invariant violated: ") +     \
                                           (msg) + " [" #cond "] at " __FILE__ ":" + \
                                           std::to_string(__LINE__));                \
    } while (0)

}  // namespace strata
