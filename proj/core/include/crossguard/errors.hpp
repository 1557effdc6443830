#pragma once

#include <stdexcept>
#include <string>

namespace crossguard {

class IntegrationDiverged : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Measurement band and prediction do not intersect (noise outside its assumed bounds).
class IncompatibleMeasurement : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InfeasibleInitialCondition : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No safe input signal could be produced for the next step.
class BlockedState : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Internal invariant broken, e.g. a schedule handed to the signal generator is not attainable.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class OracleTooLarge : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class PermutationCapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace crossguard
