#pragma once

#include <stdexcept>
#include <string>

namespace depfi {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A synthetic outcome weight times the sample count is not an integer.
class InfeasibleDraw : public Error {
 public:
  using Error::Error;
};

/// A column passed to binning or ingestion has no rows.
class EmptyColumn : public Error {
 public:
  using Error::Error;
};

/// A numeric column contains NaN or an infinity.
class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

/// A referenced feature name does not exist in the dataset.
class UnknownFeature : public Error {
 public:
  using Error::Error;
};

/// The target is almost surely constant, so the dependency ratio is undefined.
class DependencyUndefined : public Error {
 public:
  using Error::Error;
};

/// The feature count exceeds the configured exact-computation cap.
class TooManyFeatures : public Error {
 public:
  using Error::Error;
};

/// A subset size outside 0..m-1 was passed to the ordering weight.
class InvalidSize : public Error {
 public:
  using Error::Error;
};

/// The subset-dependency cache does not cover all subsets.
class IncompleteCache : public Error {
 public:
  using Error::Error;
};

/// A best-subset size outside 1..m was requested.
class InvalidK : public Error {
 public:
  using Error::Error;
};

/// A replacement column does not match the dataset's sample count.
class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// A catalog id outside 1..28 was requested.
class UnknownDataset : public Error {
 public:
  using Error::Error;
};

/// A submission file does not match the expected JSON shape.
class MalformedSubmission : public Error {
 public:
  using Error::Error;
};

/// A CSV stream cannot be parsed into a dataset.
class CsvError : public Error {
 public:
  using Error::Error;
};

/// A structural precondition on an argument was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace depfi
