#include <doctest.h>

#include <cmath>
#include <vector>

#include "vibrodiag/metrics.hpp"
#include "vibrodiag/types.hpp"

using namespace vibrodiag;
using namespace vibrodiag::eval;

namespace {

std::vector<Label> labels(const std::string& s) {
  std::vector<Label> out;
  for (char c : s) out.push_back(c == 'P' ? Label::P : Label::N);
  return out;
}

// published result rows (rates in percent) used as regression fixtures
struct RateRow {
  double tpr, tnr, ba;
};
const RateRow kSensorA[] = {
    {97.81, 80.51, 89.16}, {97.22, 82.58, 89.90}, {98.53, 78.13, 88.33},
    {99.34, 66.29, 82.81}, {85.55, 95.32, 90.44}, {86.73, 96.44, 91.58},
    {97.35, 72.92, 85.13}, {99.33, 90.29, 94.81}, {98.23, 99.34, 98.79},
    {98.20, 99.62, 98.91},
};
const RateRow kSensorB[] = {
    {96.67, 60.91, 78.79}, {97.57, 62.11, 79.84}, {97.66, 65.37, 81.51},
    {99.34, 66.29, 82.81}, {96.65, 71.99, 84.32}, {97.96, 71.24, 84.60},
    {94.19, 50.37, 72.28}, {91.15, 82.95, 87.05}, {98.30, 94.39, 96.35},
    {98.25, 95.32, 96.79},
};

ConfusionMatrix cm_from_rates(double tpr_pct, double tnr_pct) {
  ConfusionMatrix cm;
  cm.tp = static_cast<std::int64_t>(std::llround(tpr_pct * 100.0));
  cm.fn = 10000 - cm.tp;
  cm.tn = static_cast<std::int64_t>(std::llround(tnr_pct * 100.0));
  cm.fp = 10000 - cm.tn;
  return cm;
}

}  // namespace

TEST_CASE("confusion counts per orientation") {
  const auto truth = labels("PPPPPPPPPPNNNNNNNNNN");
  const auto cm = confusion(truth, truth);
  CHECK(cm.tp == 10);
  CHECK(cm.tn == 10);
  CHECK(cm.fp == 0);
  CHECK(cm.fn == 0);

  const auto truth2 = labels("PPPPPNNNNN");
  const auto all_p = labels("PPPPPPPPPP");
  const auto cm2 = confusion(truth2, all_p);
  CHECK(cm2.tp == 5);
  CHECK(cm2.fn == 0);
  CHECK(cm2.fp == 5);
  CHECK(cm2.tn == 0);

  // one instance of each of TP, FN, FP, TN
  const auto cm3 = confusion(labels("PPNN"), labels("PNPN"));
  CHECK(cm3.tp == 1);
  CHECK(cm3.fn == 1);
  CHECK(cm3.fp == 1);
  CHECK(cm3.tn == 1);
}

TEST_CASE("confusion rejects mismatched or empty input") {
  CHECK_THROWS_AS(confusion(labels("PP"), labels("P")), DataError);
  CHECK_THROWS_AS(confusion(labels(""), labels("")), DataError);
}

TEST_CASE("report rates and identities") {
  const auto r = report(cm_from_rates(97.81, 80.51));
  CHECK(r.tpr == doctest::Approx(0.9781));
  CHECK(r.tnr == doctest::Approx(0.8051));
  CHECK(r.ba == doctest::Approx(0.8916).epsilon(1e-12));
  CHECK(r.fnr == doctest::Approx(1.0 - r.tpr));
  CHECK(r.fpr == doctest::Approx(1.0 - r.tnr));
}

TEST_CASE("published fixture rows keep BA = (TPR+TNR)/2 within 0.01 pp") {
  for (const auto* table : {kSensorA, kSensorB}) {
    for (std::size_t i = 0; i < 10; ++i) {
      const auto& row = table[i];
      const auto r = report(cm_from_rates(row.tpr, row.tnr));
      CHECK(std::abs(r.ba * 100.0 - row.ba) < 0.01 + 1e-9);
    }
  }
}

TEST_CASE("balanced coin case") {
  ConfusionMatrix cm{7, 7, 13, 13};
  const auto r = report(cm);
  CHECK(r.tpr == doctest::Approx(0.5));
  CHECK(r.tnr == doctest::Approx(0.5));
  CHECK(r.ba == doctest::Approx(0.5));
}

TEST_CASE("swapping the class roles swaps the rates and keeps BA") {
  ConfusionMatrix cm{90, 10, 20, 80};
  const auto r = report(cm);
  ConfusionMatrix swapped{cm.tn, cm.fp, cm.fn, cm.tp};
  const auto rs = report(swapped);
  CHECK(rs.tpr == doctest::Approx(r.tnr));
  CHECK(rs.tnr == doctest::Approx(r.tpr));
  CHECK(rs.ba == doctest::Approx(r.ba));
}

TEST_CASE("missing classes are rejected") {
  CHECK_THROWS_AS(report(ConfusionMatrix{0, 0, 5, 5}), DataError);
  CHECK_THROWS_AS(report(ConfusionMatrix{5, 5, 0, 0}), DataError);
}

TEST_CASE("formatting helpers emit the expected fields") {
  ConfusionMatrix cm{9, 1, 2, 8};
  const auto r = report(cm);
  const std::string text = format_report(cm, r);
  CHECK(text.find("TPR") != std::string::npos);
  CHECK(text.find("BA") != std::string::npos);
  const std::string csv = report_csv(r);
  CHECK(csv.rfind("tpr,tnr,fpr,fnr,ba,accuracy\n", 0) == 0);
}
