#pragma once

#include <stdexcept>
#include <string>

namespace ssc {

// Malformed group spec or element literal.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the domain of an operation (h > n, rank >= n, ...).
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Enumeration would exceed a configured cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exactness assertion failed; always a bug in this library.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ssc
