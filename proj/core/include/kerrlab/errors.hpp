#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace kerrlab {

/// Base class of every numerical error raised by the library. name() carries
/// the short error identifier reported by the command-line tool.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define KERRLAB_DEFINE_ERROR(Type)                                   \
  class Type : public Error {                                        \
   public:                                                           \
    explicit Type(const std::string& what) : Error(#Type, what) {}   \
  };

KERRLAB_DEFINE_ERROR(ShapeError)
KERRLAB_DEFINE_ERROR(ParameterError)
KERRLAB_DEFINE_ERROR(TruncationError)
KERRLAB_DEFINE_ERROR(DegenerateCatError)
KERRLAB_DEFINE_ERROR(GridError)
KERRLAB_DEFINE_ERROR(OrderError)
KERRLAB_DEFINE_ERROR(ConvergenceError)
KERRLAB_DEFINE_ERROR(EigsolverError)
KERRLAB_DEFINE_ERROR(NotFoundError)
KERRLAB_DEFINE_ERROR(NoWellError)
KERRLAB_DEFINE_ERROR(BelowThresholdError)
KERRLAB_DEFINE_ERROR(ToleranceError)
KERRLAB_DEFINE_ERROR(SizeError)
KERRLAB_DEFINE_ERROR(ConventionError)
KERRLAB_DEFINE_ERROR(FitError)

#undef KERRLAB_DEFINE_ERROR

}  // namespace kerrlab
