#pragma once

#include <stdexcept>
#include <string>

namespace hysfem {

// Value with first and second derivative of a scalar function at a point.
struct Jet {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace hysfem
