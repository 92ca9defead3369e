#pragma once

#include <stdexcept>
#include <string>

namespace ofdmee {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Sensing profile whose posterior denominators vanish; no physical interpretation.
struct DegenerateProfile : Error {
    using Error::Error;
};

/// Path-loss query below the far-field reference distance.
struct DistanceBelowReference : Error {
    using Error::Error;
};

/// ACI cap requested for a band the SU believes certainly vacant (beta_oo = 0).
struct ZeroPosterior : Error {
    using Error::Error;
};

/// Energy efficiency requested for an allocation with zero rate.
struct ZeroRate : Error {
    using Error::Error;
};

/// A multiplier bracket could not be established; the instance is malformed.
struct BisectionStall : Error {
    using Error::Error;
};

/// Dinkelbach outer loop exceeded its iteration guard.
struct MaxIterations : Error {
    using Error::Error;
};

/// Reference oracle failed to converge within its iteration cap.
struct NotConverged : Error {
    using Error::Error;
};

/// validate run found instances outside tolerance.
struct ValidationFailure : Error {
    using Error::Error;
};

/// Bad config file, unknown key, or malformed CLI value.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace ofdmee
