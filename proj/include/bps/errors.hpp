#pragma once

#include <stdexcept>
#include <string>

namespace bps {

// Error hierarchy. Every failure that signals a violated mathematical
// invariant (rather than bad user input) derives from TripwireError so test
// code can distinguish "you asked for something unsupported" from "an
// internal identity broke".

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct TripwireError : Error {
    using Error::Error;
};

struct NonIntegerDimension : Error { using Error::Error; };
struct NegativeDimension : Error { using Error::Error; };
struct DegeneratePolarization : Error { using Error::Error; };
struct UnsupportedRank : Error { using Error::Error; };
struct UnsupportedEll : Error { using Error::Error; };
struct BetaDivisible : Error { using Error::Error; };
struct ExponentBeyondTruncation : Error { using Error::Error; };
struct MissingDivisorData : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct NearPole : Error { using Error::Error; };

struct NotDivisible : TripwireError { using TripwireError::TripwireError; };
struct NotPolynomial : TripwireError { using TripwireError::TripwireError; };
struct NotPalindromic : TripwireError { using TripwireError::TripwireError; };
struct NegativeBetti : TripwireError { using TripwireError::TripwireError; };
struct NotInvertible : TripwireError { using TripwireError::TripwireError; };

}  // namespace bps
