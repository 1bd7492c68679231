#pragma once

#include <stdexcept>
#include <string>

namespace xxzbell {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NonUnitVector : Error {
  explicit NonUnitVector(const std::string& msg) : Error(msg) {}
};
struct NotHermitian : Error {
  explicit NotHermitian(const std::string& msg) : Error(msg) {}
};
struct ConvergenceFailure : Error {
  explicit ConvergenceFailure(const std::string& msg) : Error(msg) {}
};
struct SvdFailure : Error {
  explicit SvdFailure(const std::string& msg) : Error(msg) {}
};
struct DegenerateDominantEigenvalue : Error {
  explicit DegenerateDominantEigenvalue(const std::string& msg) : Error(msg) {}
};
struct NotCanonicalized : Error {
  explicit NotCanonicalized(const std::string& msg) : Error(msg) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};
struct ResourceLimit : Error {
  explicit ResourceLimit(const std::string& msg) : Error(msg) {}
};
struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& msg) : Error(msg) {}
};
struct IoError : Error {
  explicit IoError(const std::string& msg) : Error(msg) {}
};
struct MalformedCsv : Error {
  explicit MalformedCsv(const std::string& msg) : Error(msg) {}
};
struct InsufficientGrid : Error {
  explicit InsufficientGrid(const std::string& msg) : Error(msg) {}
};

}  // namespace xxzbell
