#include "vibrodiag/metrics.hpp"

#include <sstream>

#include "vibrodiag/types.hpp"

namespace vibrodiag::eval {

Label label_from_string(const std::string& s) {
  if (s == "P" || s == "p") return Label::P;
  if (s == "N" || s == "n") return Label::N;
  throw DataError("label must be P or N, got '" + s + "'");
}

std::string to_string(Label label) { return label == Label::P ? "P" : "N"; }

ConfusionMatrix confusion(std::span<const Label> truth,
                          std::span<const Label> predicted) {
  if (truth.empty()) throw DataError("confusion: empty label sequence");
  if (truth.size() != predicted.size())
    throw DataError("confusion: label sequence length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == Label::P) {
      predicted[i] == Label::P ? ++cm.tp : ++cm.fn;
    } else {
      predicted[i] == Label::P ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

EvalReport report(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn <= 0)
    throw DataError("report: no positive (healthy) instances");
  if (cm.tn + cm.fp <= 0)
    throw DataError("report: no negative (damaged) instances");
  EvalReport r;
  r.tpr = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  r.tnr = static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
  r.fnr = 1.0 - r.tpr;
  r.fpr = 1.0 - r.tnr;
  r.ba = 0.5 * (r.tpr + r.tnr);
  r.accuracy = static_cast<double>(cm.tp + cm.tn) /
               static_cast<double>(cm.tp + cm.fn + cm.fp + cm.tn);
  return r;
}

std::string format_report(const ConfusionMatrix& cm, const EvalReport& r) {
  std::ostringstream os;
  os << "                 true P    true N\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "  pred P  %9lld %9lld\n",
                static_cast<long long>(cm.tp), static_cast<long long>(cm.fp));
  os << buf;
  std::snprintf(buf, sizeof buf, "  pred N  %9lld %9lld\n",
                static_cast<long long>(cm.fn), static_cast<long long>(cm.tn));
  os << buf;
  std::snprintf(buf, sizeof buf,
                "  TPR %.4f  TNR %.4f  FPR %.4f  FNR %.4f  BA %.4f  Acc %.4f\n",
                r.tpr, r.tnr, r.fpr, r.fnr, r.ba, r.accuracy);
  os << buf;
  return os.str();
}

std::string report_csv(const EvalReport& r) {
  std::ostringstream os;
  os << "tpr,tnr,fpr,fnr,ba,accuracy\n";
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.tpr,
                r.tnr, r.fpr, r.fnr, r.ba, r.accuracy);
  os << buf;
  return os.str();
}

}  // namespace vibrodiag::eval
