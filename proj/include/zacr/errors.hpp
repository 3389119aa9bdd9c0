#pragma once

#include <stdexcept>
#include <string>

namespace zacr {

// Malformed or inconsistent input data (CSV rows, impossible observations).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A computation that should have succeeded did not (non-finite likelihood at
// the reported optimum, singular information matrix, calibration target out
// of range, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace zacr
