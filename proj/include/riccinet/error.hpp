#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace riccinet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violation on an argument (bad k, bad class pair, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Malformed IDX file. Carries the file and the byte offset where parsing stopped.
class IdxParseError : public Error {
 public:
  enum class Kind { BadMagic, Truncated, CountMismatch, Io };

  IdxParseError(Kind kind, std::string path, std::uint64_t offset, const std::string& what)
      : Error(path + " @ byte " + std::to_string(offset) + ": " + what),
        kind_(kind),
        path_(std::move(path)),
        offset_(offset) {}

  Kind kind() const noexcept { return kind_; }
  const std::string& path() const noexcept { return path_; }
  std::uint64_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::string path_;
  std::uint64_t offset_;
};

/// Matrix shapes do not chain. `layer` is the 1-based layer whose input did not fit.
class ShapeError : public Error {
 public:
  ShapeError(std::size_t layer, const std::string& what)
      : Error("layer " + std::to_string(layer) + ": " + what), layer_(layer) {}
  std::size_t layer() const noexcept { return layer_; }

 private:
  std::size_t layer_;
};

/// Loss became NaN or infinite during training.
class TrainingDiverged : public Error {
 public:
  TrainingDiverged(std::size_t epoch, std::size_t batch)
      : Error("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
              std::to_string(batch)),
        epoch_(epoch),
        batch_(batch) {}
  std::size_t epoch() const noexcept { return epoch_; }
  std::size_t batch() const noexcept { return batch_; }

 private:
  std::size_t epoch_;
  std::size_t batch_;
};

/// Geodesic distance is undefined because the graph has more than one component.
class DisconnectedGraph : public Error {
 public:
  DisconnectedGraph() : Error("distance undefined: graph is disconnected") {}
};

/// Correlation undefined because one of the series has zero variance.
class UndefinedCoefficient : public Error {
 public:
  using Error::Error;
};

/// Edge (i, j) is not in the graph, so its curvature is not defined.
class EdgeNotFound : public Error {
 public:
  EdgeNotFound(std::size_t i, std::size_t j)
      : Error("curvature not defined: (" + std::to_string(i) + ", " + std::to_string(j) +
              ") is not an edge") {}
};

/// Least-squares design matrix is rank deficient.
class RankDeficient : public Error {
 public:
  using Error::Error;
};

}  // namespace riccinet
