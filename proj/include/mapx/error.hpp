#pragma once

#include <stdexcept>
#include <string>

namespace mapx {

// Base error for all pipeline failures surfaced to callers.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Referential-integrity or lookup failure in the network model.
struct CorpusError : Error {
    using Error::Error;
};

// Malformed input file; message carries path and line number.
struct ParseError : Error {
    using Error::Error;
};

// Invalid configuration (bad fractions, empty bins, ...).
struct ConfigError : Error {
    using Error::Error;
};

// Model used before training, bad training data, missing model file.
struct ModelError : Error {
    using Error::Error;
};

}  // namespace mapx
