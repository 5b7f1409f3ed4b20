#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace versus {

// Base for all engine errors. Subclasses map to distinct CLI exit codes.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public Error {
  public:
    using Error::Error;
};

class CorpusError : public Error {
  public:
    using Error::Error;
};

class GatewayError : public Error {
  public:
    enum class Kind { Timeout, HttpStatus, Envelope, TooLarge, Connection };

    GatewayError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

// Structured-output parse failure; carries the raw backend text for diagnostics.
class ParseError : public Error {
  public:
    ParseError(const std::string& msg, std::string raw) : Error(msg), raw_(std::move(raw)) {}
    const std::string& raw() const { return raw_; }

  private:
    std::string raw_;
};

class StageError : public Error {
  public:
    StageError(std::string stage, const std::string& msg)
        : Error("[" + stage + "] " + msg), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

  private:
    std::string stage_;
};

}  // namespace versus
