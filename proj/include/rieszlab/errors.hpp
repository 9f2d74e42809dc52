#pragma once

#include <stdexcept>
#include <string>

namespace rieszlab {

/// Invalid argument or violated precondition of a library operation.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Measure construction failure (atom-count overflow, empty geometry, ...).
class BuildError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cutoff construction rejected: a derivative bound was violated on the
/// validation grid. Carries the region where the worst value was seen.
class ProfileBoundError : public std::runtime_error {
public:
    ProfileBoundError(const std::string& msg, std::string region)
        : std::runtime_error(msg), region_(std::move(region)) {}
    const std::string& region() const { return region_; }

private:
    std::string region_;
};

/// Spread-point selection could not leave a lower-dimensional hull.
class SpreadDegeneracyError : public std::runtime_error {
public:
    SpreadDegeneracyError(const std::string& msg, int achieved_dimension)
        : std::runtime_error(msg), achieved_dimension_(achieved_dimension) {}
    int achieved_dimension() const { return achieved_dimension_; }

private:
    int achieved_dimension_;
};

/// Scale search exhausted its octave budget without finding a plateau; the
/// measure grows faster than the polynomial bound the search assumes.
class GrowthAnomalyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure of a named stage in a composed pipeline.
class PipelineError : public std::runtime_error {
public:
    PipelineError(std::string stage, const std::string& msg)
        : std::runtime_error("[" + stage + "] " + msg), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace rieszlab
