#pragma once

#include <stdexcept>
#include <string>

namespace fracvar {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid grid geometry, shape or domain mismatch.
class GridError : public Error {
public:
  using Error::Error;
};

// Fractional order outside the range an operation accepts.
class OrderError : public Error {
public:
  using Error::Error;
};

// Sampled or computed value is not finite where a finite value is required.
class ValueError : public Error {
public:
  using Error::Error;
};

// Gamma function evaluated at a pole.
class PoleError : public Error {
public:
  using Error::Error;
};

// Unknown scenario or invalid run configuration.
class UsageError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace fracvar
