#pragma once

#include <stdexcept>
#include <string>

namespace wpfr {

// Error taxonomy used across the library. The CLI maps these onto
// distinct exit codes (input errors vs numeric failures).
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad arguments, out-of-domain evaluation points, malformed input files.
class domain_error : public error {
public:
    explicit domain_error(const std::string& msg) : error(msg) {}
};

// Missing or inconsistent ingested data (e.g. volume-table entries).
class data_error : public error {
public:
    explicit data_error(const std::string& msg) : error(msg) {}
};

// Quadrature non-convergence, root-solve failure, ill-conditioned fits.
class numeric_error : public error {
public:
    explicit numeric_error(const std::string& msg) : error(msg) {}
};

// Requests beyond configured caps (derivative order, enumeration size).
class capability_error : public error {
public:
    explicit capability_error(const std::string& msg) : error(msg) {}
};

}  // namespace wpfr
