#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gcp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid circle domain: overlapping/touching disks or a non-positive radius.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two disks overlap or touch. Indices are zero-based; what() prints them one-based.
class OverlapError : public DomainError {
public:
    OverlapError(std::size_t first, std::size_t second, double separation, double radius_sum)
        : DomainError("circles " + std::to_string(first + 1) + " and " + std::to_string(second + 1) +
                      " overlap: center distance " + std::to_string(separation) +
                      " <= radius sum " + std::to_string(radius_sum)),
          first_(first),
          second_(second) {}

    std::size_t first() const noexcept { return first_; }
    std::size_t second() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

/// Bad discretization parameters (odd or too small n).
class GridError : public Error {
public:
    using Error::Error;
};

/// Array shapes that do not match the grid or the number of circles.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// The Fredholm system is numerically singular (condition estimate above threshold).
class NearSingularError : public Error {
public:
    NearSingularError(const std::string& what, double condition)
        : Error(what), condition_(condition) {}

    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

/// Null-space dimension counting was ambiguous (no clear spectral gap).
class SpectralGapError : public Error {
public:
    using Error::Error;
};

/// An evaluation point lies inside or on one of the disks.
class PointError : public Error {
public:
    using Error::Error;
};

/// Malformed input document. `path()` is a JSON-pointer-like location.
class InputError : public Error {
public:
    InputError(std::string path, const std::string& message)
        : Error(path + ": " + message), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace gcp
