#ifndef HARDY_ERROR_HPP
#define HARDY_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hardy
{

//! base of every error thrown by the library; `origin()` names the module
class Error : public std::runtime_error
{
public:
  Error(std::string origin, const std::string& what)
    : std::runtime_error(what), origin_(std::move(origin)) {}

  const std::string& origin() const noexcept { return origin_; }

private:
  std::string origin_;
};

class ParseError : public Error
{
public:
  ParseError(const std::string& msg, std::size_t offset)
    : Error("exprlang", msg + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

//! evaluation outside the real domain (ln/sqrt of negative, division by zero, ...)
class DomainError : public Error
{
public:
  DomainError(const std::string& msg, double x)
    : Error("exprlang", msg + " at x=" + std::to_string(x)), x_(x) {}

  double x() const noexcept { return x_; }

private:
  double x_;
};

class GridError : public Error
{
public:
  explicit GridError(const std::string& msg) : Error("ode_engine", msg) {}
};

//! step-size underflow or non-finite state; carries the last point reached
class IntegrationError : public Error
{
public:
  IntegrationError(const std::string& msg, double last_reached)
    : Error("ode_engine", msg + " (last reachable t=" + std::to_string(last_reached) + ")"),
      last_(last_reached) {}

  double last_reached() const noexcept { return last_; }

private:
  double last_;
};

class QuadratureError : public Error
{
public:
  explicit QuadratureError(const std::string& msg) : Error("quadrature", msg) {}
};

class ModuleError : public Error
{
public:
  using Error::Error;
};

class ConfigError : public Error
{
public:
  ConfigError(const std::string& key_path, const std::string& msg)
    : Error("cli", key_path + ": " + msg), key_(key_path) {}

  const std::string& key_path() const noexcept { return key_; }

private:
  std::string key_;
};

} // namespace hardy

#endif // HARDY_ERROR_HPP
