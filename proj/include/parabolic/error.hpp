#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace parabolic {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// argument outside the domain of the map / field
class DomainError : public Error {
public:
  using Error::Error;
};

// ODE integrator gave up; reached_time is how far it got
class IntegrationError : public Error {
public:
  IntegrationError(const std::string& what, double reached_time)
      : Error(what), reached_time_(reached_time) {}
  double reached_time() const noexcept { return reached_time_; }

private:
  double reached_time_;
};

class NumericError : public Error {
public:
  using Error::Error;
};

class ConstructionError : public Error {
public:
  using Error::Error;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

// misuse of LogNumber arithmetic outside what the representation supports
class UsageError : public Error {
public:
  using Error::Error;
};

// fixed points closer than the resolution
class AmbiguityError : public Error {
public:
  AmbiguityError(const std::string& what, std::vector<double> cluster)
      : Error(what), cluster_(std::move(cluster)) {}
  const std::vector<double>& cluster() const noexcept { return cluster_; }

private:
  std::vector<double> cluster_;
};

} // namespace parabolic
