#pragma once

#include <stdexcept>
#include <string>

namespace bslab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OracleDomainError : public Error {
 public:
  using Error::Error;
};

/// Derivative requested at a PL corner without a one-sided flag.
class BreakpointError : public Error {
 public:
  using Error::Error;
};

class EmptyIntersection : public Error {
 public:
  using Error::Error;
};

class EnclosureTooWide : public Error {
 public:
  using Error::Error;
};

/// No l with l/(n-1) inside the rotation enclosure: the pair cannot satisfy
/// the BS(1,n) relation.
class NoAdmissibleL : public Error {
 public:
  using Error::Error;
};

class NoFixedPoint : public Error {
 public:
  using Error::Error;
};

class NotConverged : public Error {
 public:
  NotConverged(const std::string& what, long iterations)
      : Error(what), iterations_(iterations) {}
  long iterations() const { return iterations_; }

 private:
  long iterations_;
};

class DepthLimit : public Error {
 public:
  using Error::Error;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

class ConstructionFailed : public Error {
 public:
  using Error::Error;
};

class OrderViolation : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bslab
