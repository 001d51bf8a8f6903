#pragma once

#include <stdexcept>
#include <string>

namespace pfwave {

// Division guard on the (1,1,1,1) elasticity entry; several reduction
// formulas divide by it.
class DivisionGuard : public std::runtime_error {
public:
    explicit DivisionGuard(const std::string& what) : std::runtime_error(what) {}
};

// The potential does not have the required two-minima/one-maximum structure.
class NotDoubleWell : public std::runtime_error {
public:
    explicit NotDoubleWell(const std::string& what) : std::runtime_error(what) {}
};

// Flatness-order detection ran out of derivatives (zero polynomial).
class OrderDetectionFailure : public std::runtime_error {
public:
    explicit OrderDetectionFailure(const std::string& what) : std::runtime_error(what) {}
};

// The two well heights differ; no wave connecting the minima exists.
class UnequalWells : public std::runtime_error {
public:
    UnequalWells(const std::string& what, double gap_)
        : std::runtime_error(what), gap(gap_) {}
    double gap;
};

// Profile integration failed its monotonicity/certificate checks at the
// requested step; the caller must refine dx.
class StepTooLarge : public std::runtime_error {
public:
    explicit StepTooLarge(const std::string& what) : std::runtime_error(what) {}
};

// Too few tail nodes inside the fit window to measure a decay rate.
class InsufficientTail : public std::runtime_error {
public:
    explicit InsufficientTail(const std::string& what) : std::runtime_error(what) {}
};

// A simulation produced a non-finite value, or the declared stability
// bound was violated.
class Blowup : public std::runtime_error {
public:
    Blowup(const std::string& what, double time_, long node_)
        : std::runtime_error(what), time(time_), node(node_) {}
    double time;
    long node;
};

class NoCrossing : public std::runtime_error {
public:
    explicit NoCrossing(const std::string& what) : std::runtime_error(what) {}
};

class MultipleCrossings : public std::runtime_error {
public:
    explicit MultipleCrossings(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pfwave
