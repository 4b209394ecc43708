#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gamow {

/// Base of every error raised by the library. The category drives the CLI
/// exit code.
class Error : public std::runtime_error {
public:
    enum class Category { config, numerical, oracle };

    Error(Category category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    Category category() const noexcept { return category_; }

private:
    Category category_;
};

class InvalidSpec : public Error {
public:
    explicit InvalidSpec(const std::string& what) : Error(Category::config, "invalid spec: " + what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(Category::config, "config error: " + what) {}
};

class ResolutionError : public Error {
public:
    explicit ResolutionError(const std::string& what)
        : Error(Category::numerical, "resolution error: " + what) {}
};

class SingularMomentum : public Error {
public:
    SingularMomentum() : Error(Category::numerical, "singular momentum: k = 0") {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(Category::numerical, "domain error: " + what) {}
};

class OverflowError : public Error {
public:
    explicit OverflowError(std::complex<double> z)
        : Error(Category::numerical, "overflow evaluating w(z) at z = (" + std::to_string(z.real()) + ", " +
                                         std::to_string(z.imag()) + ")"),
          z_(z) {}

    std::complex<double> argument() const noexcept { return z_; }

private:
    std::complex<double> z_;
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, std::vector<std::complex<double>> trail)
        : Error(Category::numerical, "no convergence: " + what), trail_(std::move(trail)) {}

    /// Iterates visited before giving up, seed first.
    const std::vector<std::complex<double>>& trail() const noexcept { return trail_; }

private:
    std::vector<std::complex<double>> trail_;
};

class IncompleteScan : public Error {
public:
    explicit IncompleteScan(const std::string& what)
        : Error(Category::numerical, "incomplete pole scan: " + what) {}
};

class DegenerateNormalization : public Error {
public:
    DegenerateNormalization()
        : Error(Category::numerical, "degenerate normalization: bilinear norm of the raw state vanishes") {}
};

class DegeneratePole : public Error {
public:
    DegeneratePole() : Error(Category::numerical, "degenerate pole: zero width") {}
};

class IncompatibleGrid : public Error {
public:
    explicit IncompatibleGrid(const std::string& what)
        : Error(Category::numerical, "incompatible grid: " + what) {}
};

class OracleInvalid : public Error {
public:
    explicit OracleInvalid(const std::string& what) : Error(Category::oracle, "oracle invalid: " + what) {}
};

}  // namespace gamow
