#pragma once

#include <stdexcept>
#include <string>

namespace locus {

// Base class for all pipeline errors; carries the stage name used by the CLI
// when reporting where a run failed.
class Error : public std::runtime_error {
 public:
  Error(std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct FrameConsumesImage : Error {
  explicit FrameConsumesImage(const std::string& msg = "black frame consumes the whole image")
      : Error("frame-removal", msg) {}
};

struct DegenerateHistogram : Error {
  explicit DegenerateHistogram(const std::string& msg = "fewer than 2 populated gray levels")
      : Error("thresholding", msg) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg = "input dimensions disagree")
      : Error("fusion", msg) {}
};

struct EmptyMask : Error {
  explicit EmptyMask(const std::string& msg = "no foreground pixels under the chosen policy")
      : Error("localization", msg) {}
};

struct DegenerateCurve : Error {
  explicit DegenerateCurve(const std::string& msg = "control points are collinear")
      : Error("ground-truth", msg) {}
};

struct DegenerateFit : Error {
  explicit DegenerateFit(const std::string& msg = "all abscissae equal; line fit undefined")
      : Error("evaluation", msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error("parse", msg) {}
};

struct ManifestError : Error {
  explicit ManifestError(const std::string& msg) : Error("manifest", msg) {}
};

struct IoError : Error {
  explicit IoError(const std::string& msg) : Error("io", msg) {}
};

}  // namespace locus
