#ifndef VIBRODIAG_METRICS_HPP
#define VIBRODIAG_METRICS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace vibrodiag::eval {

/// Binary class label: P = healthy (positive), N = damaged (negative).
enum class Label : std::uint8_t { P, N };

Label label_from_string(const std::string& s);
std::string to_string(Label label);

struct ConfusionMatrix {
  std::int64_t tp = 0;  // true P predicted P
  std::int64_t fn = 0;  // true P predicted N
  std::int64_t fp = 0;  // true N predicted P
  std::int64_t tn = 0;  // true N predicted N
};

struct EvalReport {
  double tpr = 0.0;
  double tnr = 0.0;
  double fpr = 0.0;  // 1 - tnr
  double fnr = 0.0;  // 1 - tpr
  double ba = 0.0;   // (tpr + tnr) / 2
  double accuracy = 0.0;
};

ConfusionMatrix confusion(std::span<const Label> truth,
                          std::span<const Label> predicted);

/// Requires at least one instance of each class.
EvalReport report(const ConfusionMatrix& cm);

/// Fixed-width text rendering of the matrix and derived rates.
std::string format_report(const ConfusionMatrix& cm, const EvalReport& r);

/// Single CSV row (with header) of the report fields.
std::string report_csv(const EvalReport& r);

}  // namespace vibrodiag::eval

#endif
