#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rpmt {

// The projected covariance G'SG of one draw could not be factorized as SPD.
class ProjectedSingularityError : public std::runtime_error {
 public:
  explicit ProjectedSingularityError(std::size_t projection_index)
      : std::runtime_error("projected covariance is numerically singular at projection draw " +
                           std::to_string(projection_index)),
        index_(projection_index) {}

  std::size_t projection_index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// A coordinate (coordinate() >= 0) or the matrix as a whole (-1) carries no
// usable variance.
class DegenerateVarianceError : public std::runtime_error {
 public:
  explicit DegenerateVarianceError(const std::string& what, std::ptrdiff_t coordinate = -1)
      : std::runtime_error(what), coordinate_(coordinate) {}

  std::ptrdiff_t coordinate() const noexcept { return coordinate_; }

 private:
  std::ptrdiff_t coordinate_;
};

}  // namespace rpmt
