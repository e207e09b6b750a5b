#pragma once

#include <stdexcept>
#include <string>

namespace rejgate {

// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller supplied an invalid parameter (cost model, bins, search bounds...).
// The CLI maps this to exit code 2.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// The data cannot support the request: empty dataset, malformed rows,
// missing logits or group tags, unreadable/unwritable files.
// The CLI maps this to exit code 1.
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace rejgate
