#pragma once

#include <stdexcept>
#include <string>

namespace mvp {

/// Malformed or out-of-range input: bad config field, bad MDP document,
/// inconsistent dimensions.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An environment whose trajectories can collect more than unit total reward.
class AssumptionViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mvp
