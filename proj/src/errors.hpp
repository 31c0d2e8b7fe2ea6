#ifndef SIRW_ERRORS_HPP
#define SIRW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sirw {

// Error categories; mirrored one-to-one by the C API status codes.
enum class Errc {
    domain_error = 1,   // argument outside mathematical domain
    invalid_argument,   // precondition violation on inputs
    step_failure,       // adaptive step controller underflowed
    no_qss,             // infected fraction never fell below threshold
    no_solution,        // root bracketing failed
    empty_curve,        // requested level set is unattainable
    parse_error,        // malformed configuration document
    validation_error,   // well-formed config violating an invariant
    io_error,           // file could not be read or written
    numeric_error,      // iteration failed to converge
};

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace sirw

#endif
