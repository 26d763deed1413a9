#ifndef VIBRODIAG_TYPES_HPP
#define VIBRODIAG_TYPES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vibrodiag {

/// Bad or degenerate input data (empty signals, all-zero spectra,
/// dimension mismatches, unreadable files). CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Iterative solver failed to converge within its iteration cap.
/// CLI maps this to exit code 3.
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Uniformly sampled real-valued vibration waveform.
struct Signal {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

/// Throws DataError unless the signal is non-empty, finite and has a
/// positive sample rate.
void validate(const Signal& signal);

/// Dense row-major matrix, just enough for feature tables and kernels.
template <typename T>
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, T fill = T{})
      : rows(r), cols(c), data(r * c, fill) {}

  T& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  T* row(std::size_t r) { return data.data() + r * cols; }
  const T* row(std::size_t r) const { return data.data() + r * cols; }
};

}  // namespace vibrodiag

#endif
