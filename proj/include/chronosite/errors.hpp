#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace chronosite {

// Base class for all library errors. Each concrete type names one failure
// condition so callers can catch exactly what they handle.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define CHRONOSITE_DEFINE_ERROR(Name) \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

// timeline
CHRONOSITE_DEFINE_ERROR(UnknownState);
CHRONOSITE_DEFINE_ERROR(OrderError);
CHRONOSITE_DEFINE_ERROR(PaletteTooSmall);
CHRONOSITE_DEFINE_ERROR(EmptyModel);

// geometry
CHRONOSITE_DEFINE_ERROR(InvalidCloud);
CHRONOSITE_DEFINE_ERROR(InvalidScale);
CHRONOSITE_DEFINE_ERROR(InvalidTransform);
CHRONOSITE_DEFINE_ERROR(InvalidVoxelSize);
CHRONOSITE_DEFINE_ERROR(DegenerateCloud);

// archive
CHRONOSITE_DEFINE_ERROR(DuplicateId);
CHRONOSITE_DEFINE_ERROR(EmptyFilter);
CHRONOSITE_DEFINE_ERROR(UnknownDocument);
CHRONOSITE_DEFINE_ERROR(UnknownEntity);
CHRONOSITE_DEFINE_ERROR(AlreadyDated);

// project files
CHRONOSITE_DEFINE_ERROR(InvalidProject);
CHRONOSITE_DEFINE_ERROR(ChunkError);

#undef CHRONOSITE_DEFINE_ERROR

// Input file could not be parsed. `line()` is 1-based, 0 when the failure is
// not tied to a line (truncated binary data, missing header).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace chronosite
