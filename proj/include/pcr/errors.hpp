#pragma once

#include <stdexcept>
#include <string>

namespace pcr {

// Base class for all errors raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
public:
    using Error::Error;
};
class EmptyCloud : public Error {
public:
    using Error::Error;
};
class DegenerateCloud : public Error {
public:
    using Error::Error;
};
class ConvergenceFailure : public Error {
public:
    using Error::Error;
};
class InvalidRotation : public Error {
public:
    using Error::Error;
};
class BadParams : public Error {
public:
    using Error::Error;
};
class IsolatedNode : public Error {
public:
    using Error::Error;
};
class BandwidthTooLarge : public Error {
public:
    using Error::Error;
};
class DimensionMismatch : public Error {
public:
    using Error::Error;
};
class WrongShiftKind : public Error {
public:
    using Error::Error;
};
class IllConditioned : public Error {
public:
    using Error::Error;
};
class AllZeroFeatures : public Error {
public:
    using Error::Error;
};
class ZeroSupport : public Error {
public:
    using Error::Error;
};
class InsufficientNeighbors : public Error {
public:
    using Error::Error;
};
class DegenerateConfiguration : public Error {
public:
    using Error::Error;
};

}  // namespace pcr
