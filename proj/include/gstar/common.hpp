#pragma once

#include <stdexcept>
#include <string>

namespace gstar {

/// Base class for all library errors. `what()` starts with the error class
/// name so callers can emit a single machine-parseable line.
class Error : public std::runtime_error {
  public:
    Error(const std::string& cls, const std::string& msg)
        : std::runtime_error(cls + ": " + msg), cls_(cls) {}
    const std::string& error_class() const { return cls_; }

  private:
    std::string cls_;
};

#define GSTAR_DEFINE_ERROR(Name)                                     \
    class Name : public Error {                                      \
      public:                                                        \
        explicit Name(const std::string& msg) : Error(#Name, msg) {} \
    }

GSTAR_DEFINE_ERROR(InvalidArgument);
GSTAR_DEFINE_ERROR(ConstantSeries);
GSTAR_DEFINE_ERROR(AllFiltered);
GSTAR_DEFINE_ERROR(WindowTooShort);
GSTAR_DEFINE_ERROR(NonConvergence);
GSTAR_DEFINE_ERROR(UnstableModel);
GSTAR_DEFINE_ERROR(FailedToStabilize);
GSTAR_DEFINE_ERROR(AllZeroActuals);
GSTAR_DEFINE_ERROR(EmptyInput);
GSTAR_DEFINE_ERROR(IoError);
GSTAR_DEFINE_ERROR(ParseError);

#undef GSTAR_DEFINE_ERROR

/// Half-open index range [begin, end) over the time axis (0-based).
struct TimeRange {
    int begin = 0;
    int end = 0;

    int length() const { return end - begin; }
    bool valid() const { return begin >= 0 && end >= begin; }
};

/// Max time lag p and neighborhood-level count eta, shared by every lag.
struct ModelOrder {
    int p = 1;
    int eta = 1;

    int dim() const { return p * eta; }
    void validate() const {
        if (p < 1 || eta < 1)
            throw InvalidArgument("ModelOrder requires p >= 1 and eta >= 1");
    }
};

}  // namespace gstar
