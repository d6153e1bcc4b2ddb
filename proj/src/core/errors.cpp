#include "hpcwl/core/errors.hpp"

namespace hpcwl {

IOError::IOError(const std::string& path, const std::string& why)
    : Error("IOError", path + ": " + why, ErrorKind::input), path_(path) {}

SchemaError::SchemaError(std::size_t row, std::string field, const std::string& detail)
    : Error("SchemaError",
            "row " + std::to_string(row) + ", field '" + field + "': " + detail,
            ErrorKind::input),
      row_(row),
      field_(std::move(field)) {}

TimestampOrderError::TimestampOrderError(std::size_t row)
    : Error("TimestampOrderError",
            "row " + std::to_string(row) + ": submit_time <= start_time <= end_time violated",
            ErrorKind::input),
      row_(row) {}

OverlappingFactorWindows::OverlappingFactorWindows(const std::string& resource)
    : Error("OverlappingFactorWindows", resource + ": SU factor windows overlap",
            ErrorKind::input) {}

MissingGeometry::MissingGeometry(const std::string& resource)
    : Error("MissingGeometry", resource + ": nodes and cores_per_node are required",
            ErrorKind::input) {}

NoFactorForDate::NoFactorForDate(const std::string& resource, const std::string& date)
    : Error("NoFactorForDate", resource + ": no SU factor window covers " + date,
            ErrorKind::analysis) {}

UnknownResource::UnknownResource(const std::string& resource)
    : Error("UnknownResource", "unknown resource '" + resource + "'", ErrorKind::input) {}

InvalidMemInfo::InvalidMemInfo(const std::string& detail)
    : Error("InvalidMemInfo", detail, ErrorKind::input) {}

InvalidPattern::InvalidPattern(std::size_t line, const std::string& detail)
    : Error("InvalidPattern", "pattern line " + std::to_string(line) + ": " + detail,
            ErrorKind::input) {}

EmptyGroup::EmptyGroup(const std::string& group)
    : Error("EmptyGroup", "group '" + group + "' is empty", ErrorKind::analysis) {}

EmptyProfile::EmptyProfile()
    : Error("EmptyProfile", "depth profile has no project with positive usage",
            ErrorKind::analysis) {}

DegenerateInput::DegenerateInput(const std::string& detail)
    : Error("DegenerateInput", detail, ErrorKind::analysis) {}

SeparationDetected::SeparationDetected()
    : Error("SeparationDetected", "perfect separation: coefficient magnitude exceeded 50",
            ErrorKind::analysis) {}

NonConvergence::NonConvergence(int iterations)
    : Error("NonConvergence", "no convergence after " + std::to_string(iterations) + " iterations",
            ErrorKind::analysis) {}

UnknownAnalysis::UnknownAnalysis(const std::string& name)
    : Error("UnknownAnalysis", "unknown analysis '" + name + "'", ErrorKind::analysis) {}

AnalysisError::AnalysisError(const std::string& analysis, const Error& inner)
    : Error(inner.code(), "analysis '" + analysis + "': " + inner.what(), inner.kind()),
      analysis_(analysis) {}

AnalysisError::AnalysisError(const std::string& analysis, const std::string& message)
    : Error("AnalysisError", "analysis '" + analysis + "': " + message, ErrorKind::analysis),
      analysis_(analysis) {}

}  // namespace hpcwl
