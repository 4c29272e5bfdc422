#pragma once

#include <stdexcept>
#include <string>

namespace tunnel {

/// Base for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration; `field()` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, std::string reason)
        : Error("config error: " + field + ": " + reason), field_(std::move(field)), reason_(std::move(reason)) {}
    const std::string& field() const noexcept { return field_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string field_;
    std::string reason_;
};

/// Query outside the valid geometry (e.g. a ray cast from outside the corridor).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Non-finite input handed to the dynamics.
class NonFiniteInput : public Error {
public:
    NonFiniteInput(std::string field)
        : Error("non-finite input: " + field), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Integration produced a non-finite state.
class DynamicsDiverged : public Error {
public:
    DynamicsDiverged(long step, std::string field)
        : Error("dynamics diverged at substep " + std::to_string(step) + " (" + field + ")"),
          step_(step), field_(std::move(field)) {}
    long step() const noexcept { return step_; }
    const std::string& field() const noexcept { return field_; }

private:
    long step_;
    std::string field_;
};

/// Trim solver did not reach tolerance.
class TrimError : public Error {
public:
    TrimError(double residual, const std::string& what)
        : Error("trim failed: " + what + " (best residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// API misuse, e.g. stepping a finished episode.
class UsageError : public Error {
public:
    using Error::Error;
};

/// File-system failures; message carries the path.
class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace tunnel
