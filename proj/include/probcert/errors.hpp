#pragma once

// Exception types shared by every probcert module.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace probcert {

/// An argument lies outside the mathematical domain of a function
/// (e.g. mu + eps not in (0,1) for the Hoeffding exponent).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// One or more (eps_a, eps_r, delta) conditions failed. Each failed
/// condition is listed separately in violations().
class SpecError : public std::invalid_argument {
public:
    explicit SpecError(std::vector<std::string> violations)
        : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out = "invalid error specification: ";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) out += "; ";
            out += items[i];
        }
        return out;
    }

    std::vector<std::string> violations_;
};

/// A sample or input value is unusable. index() is the zero-based position
/// of the offending value in the stream it came from.
class SampleError : public std::invalid_argument {
public:
    SampleError(const std::string& what, std::size_t index)
        : std::invalid_argument(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// A sample source ran dry before the requested number of draws.
class SourceExhausted : public std::runtime_error {
public:
    SourceExhausted(std::size_t requested, std::size_t obtained)
        : std::runtime_error("sample source exhausted after " + std::to_string(obtained) +
                             " of " + std::to_string(requested) + " draws"),
          requested_(requested), obtained_(obtained) {}

    std::size_t requested() const noexcept { return requested_; }
    std::size_t obtained() const noexcept { return obtained_; }

private:
    std::size_t requested_;
    std::size_t obtained_;
};

/// An exponential left the representable range. scenario() names the
/// offending scenario row.
class OverflowError : public std::overflow_error {
public:
    OverflowError(const std::string& what, std::size_t scenario)
        : std::overflow_error(what), scenario_(scenario) {}

    std::size_t scenario() const noexcept { return scenario_; }

private:
    std::size_t scenario_;
};

/// A malformed line in a text input file. line() is 1-based.
class InputError : public std::invalid_argument {
public:
    InputError(const std::string& what, std::size_t line)
        : std::invalid_argument(what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A file could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace probcert
