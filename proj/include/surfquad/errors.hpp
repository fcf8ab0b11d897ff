#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace surfquad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Closest-point iteration exhausted its budget.
class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double residual, std::string what)
      : Error(std::move(what)), iterations_(iterations), residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

/// The query point is too far from the surface for a unique projection.
class OutsideTube : public Error {
 public:
  using Error::Error;
};

class DegeneratePoint : public Error {
 public:
  using Error::Error;
};

class TopologyMismatch : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NonTriangleFace : public Error {
 public:
  NonTriangleFace(std::size_t line, int vertex_count)
      : Error("line " + std::to_string(line) + ": face has " +
              std::to_string(vertex_count) + " vertices, expected 3"),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// det(J^T J) <= 0 somewhere on a curved element: the chart folds.
class DegenerateJacobian : public Error {
 public:
  using Error::Error;
};

class UnsupportedDegree : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Failure while building or integrating a curved element.
/// Carries the face index and, for projection failures, the local node index.
class ElementError : public Error {
 public:
  ElementError(std::size_t face, int node, const std::string& cause)
      : Error(describe(face, node, cause)), face_(face), node_(node) {}
  std::size_t face() const noexcept { return face_; }
  int node() const noexcept { return node_; }

 private:
  static std::string describe(std::size_t face, int node,
                              const std::string& cause) {
    std::string s = "face " + std::to_string(face);
    if (node >= 0) s += " node " + std::to_string(node);
    return s + ": " + cause;
  }
  std::size_t face_;
  int node_;
};

/// Aggregate of per-element failures from a whole-surface operation.
class IntegrationError : public Error {
 public:
  IntegrationError(std::vector<std::size_t> faces, const std::string& first)
      : Error(std::to_string(faces.size()) + " element(s) failed; first: " +
              first),
        faces_(std::move(faces)) {}
  const std::vector<std::size_t>& faces() const noexcept { return faces_; }

 private:
  std::vector<std::size_t> faces_;
};

}  // namespace surfquad
