#pragma once

#include <stdexcept>
#include <string>

namespace chequenet {

// Base class for everything this library throws on purpose.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Bad records, unknown ids, out-of-range parameters, malformed files.
class invalid_input : public error {
public:
    explicit invalid_input(const std::string& what) : error(what) {}
};

// Well-formed request that cannot be satisfied (enumeration too large,
// generator parameters that admit no network, arithmetic overflow in an
// exact computation).
class infeasible : public error {
public:
    explicit infeasible(const std::string& what) : error(what) {}
};

} // namespace chequenet
