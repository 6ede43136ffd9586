#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sympcap {

/// Broad class of a failure; the CLI maps these onto exit codes.
enum class ErrorCategory { validation, numerical };

/** Base of every error raised by the library.  `name()` is the stable
    identifier reported in structured error objects. */
class Error : public std::runtime_error {
public:
    Error(std::string name, ErrorCategory category, const std::string& what)
        : std::runtime_error(what), name_(std::move(name)), category_(category) {}

    const std::string& name() const noexcept { return name_; }
    ErrorCategory category() const noexcept { return category_; }

private:
    std::string name_;
    ErrorCategory category_;
};

#define SYMPCAP_DEFINE_ERROR(Type, Category)                                   \
    class Type : public Error {                                                \
    public:                                                                    \
        explicit Type(const std::string& what)                                 \
            : Error(#Type, ErrorCategory::Category, what) {}                   \
    };

SYMPCAP_DEFINE_ERROR(InvalidArgument, validation)
SYMPCAP_DEFINE_ERROR(DimensionError, validation)
SYMPCAP_DEFINE_ERROR(UnsupportedRegion, validation)
SYMPCAP_DEFINE_ERROR(InvalidNeck, validation)
SYMPCAP_DEFINE_ERROR(NotABlob, validation)
SYMPCAP_DEFINE_ERROR(MultiWell, validation)
SYMPCAP_DEFINE_ERROR(UnsupportedForClosedForm, validation)
SYMPCAP_DEFINE_ERROR(NotPositiveDefinite, numerical)
SYMPCAP_DEFINE_ERROR(NotSymplectic, numerical)
SYMPCAP_DEFINE_ERROR(NumericalDegeneracy, numerical)
SYMPCAP_DEFINE_ERROR(FlowError, numerical)
SYMPCAP_DEFINE_ERROR(NoClassicalRegion, numerical)
SYMPCAP_DEFINE_ERROR(NonMonotoneAction, numerical)
SYMPCAP_DEFINE_ERROR(LevelNotBound, numerical)

#undef SYMPCAP_DEFINE_ERROR

/// Sampled inclusion check failed; carries the offending point when one exists.
class CertificateInvalid : public Error {
public:
    CertificateInvalid(const std::string& what, std::vector<double> witness = {})
        : Error("CertificateInvalid", ErrorCategory::numerical, what),
          witness_(std::move(witness)) {}

    const std::vector<double>& witness() const noexcept { return witness_; }

private:
    std::vector<double> witness_;
};

/// A trajectory left the finite range; `time()` is the snapshot where it was seen.
class FlowDiverged : public Error {
public:
    FlowDiverged(const std::string& what, double time)
        : Error("FlowDiverged", ErrorCategory::numerical, what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

}  // namespace sympcap
