#pragma once

#include <stdexcept>
#include <string>

namespace mbpf {

/// Base class of everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration input (files, schemas, flag values). CLI exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A computation left its analytic domain (bad frequency, unbracketed band,
/// singular point). CLI exit code 3.
class AnalysisError : public Error {
public:
    using Error::Error;
};

/// Malformed or unusable external data (Touchstone files, disjoint sweeps).
/// CLI exit code 4.
class DataError : public Error {
public:
    using Error::Error;
};

class DomainError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class InvalidElementError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class EmptyCascadeError : public AnalysisError {
public:
    EmptyCascadeError() : AnalysisError("cascade of zero blocks") {}
};

class SingularConversionError : public AnalysisError {
public:
    explicit SingularConversionError(double frequency_hz)
        : AnalysisError("ABCD to S conversion is singular at " +
                        std::to_string(frequency_hz) + " Hz"),
          frequency_hz_(frequency_hz) {}
    double frequency_hz() const { return frequency_hz_; }

private:
    double frequency_hz_;
};

class SingularPointError : public AnalysisError {
public:
    explicit SingularPointError(double frequency_hz)
        : AnalysisError("immittance singular at " + std::to_string(frequency_hz) + " Hz"),
          frequency_hz_(frequency_hz) {}
    double frequency_hz() const { return frequency_hz_; }

private:
    double frequency_hz_;
};

class NonTransmissiveError : public AnalysisError {
public:
    NonTransmissiveError() : AnalysisError("network is non-transmissive (s21 = 0)") {}
};

class InsufficientGridError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class BandNotBracketedError : public AnalysisError {
public:
    enum class Side { lower, upper };

    explicit BandNotBracketedError(Side side)
        : AnalysisError(side == Side::lower
                            ? "no lower 3 dB crossing inside the sweep grid"
                            : "no upper 3 dB crossing inside the sweep grid"),
          side_(side) {}
    Side side() const { return side_; }

private:
    Side side_;
};

class NotFoundError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class ParseError : public DataError {
public:
    ParseError(int line, const std::string& what)
        : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class UnsupportedFormatError : public DataError {
public:
    using DataError::DataError;
};

class CoverageError : public DataError {
public:
    using DataError::DataError;
};

class NoOverlapError : public DataError {
public:
    NoOverlapError() : DataError("sweeps have no overlapping frequency range") {}
};

}  // namespace mbpf
