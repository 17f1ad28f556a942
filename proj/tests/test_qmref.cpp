#include <gtest/gtest.h>

#include <cmath>

#include "qent/entangle.hpp"
#include "qent/error.hpp"
#include "qent/qmref.hpp"

using namespace qent;

namespace {

const double kLog2 = std::log(2.0);

QMState two_term(cplx a, cplx b) { return {2, 2, {{a, 0, 1}, {b, 1, 0}}}; }

EntropyReport report_from(const std::vector<double>& state_eigs, const std::vector<double>& vac_eigs,
                          const std::vector<double>& orders) {
  auto diag = [](const std::vector<double>& e) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(e.size()), static_cast<Eigen::Index>(e.size()));
    for (std::size_t i = 0; i < e.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = e[i];
    DensityMatrix d;
    d.matrix = m;
    return d;
  };
  return vacuum_subtracted_report(diag(state_eigs), diag(vac_eigs), orders);
}

}  // namespace

TEST(QMRef, MaximallyEntangled) {
  const double s = 1.0 / std::sqrt(2.0);
  const auto rho = qm_density_matrix(two_term(s, s));
  EXPECT_LT((rho - 0.5 * Eigen::Matrix2cd::Identity()).norm(), 1e-15);
  EXPECT_NEAR(qm_renyi(two_term(1, 1), 2).trace_power, 0.5, 1e-15);
  EXPECT_NEAR(qm_renyi(two_term(1, 1), 2).entropy, kLog2, 1e-15);
}

TEST(QMRef, SingleTermIsPure) {
  const QMState q{2, 2, {{cplx(0.3, 0.4), 1, 0}}};
  const auto rho = qm_density_matrix(q);
  EXPECT_NEAR(rho(1, 1).real(), 1.0, 1e-15);
  for (double n : {1.0, 2.0, 3.0}) EXPECT_EQ(qm_renyi(q, n).entropy, 0.0);
}

TEST(QMRef, SharedSecondIndexIsProduct) {
  const cplx a{0.6, 0.0}, b{0.0, 0.8};
  const QMState q{2, 2, {{a, 0, 0}, {b, 1, 0}}};
  EXPECT_FALSE(has_two_term_form(q));
  const auto rho = qm_density_matrix(q);
  EXPECT_LT(std::abs(rho(0, 1) - a * std::conj(b)), 1e-15);
  const auto ev = spectrum(rho).eigenvalues;
  EXPECT_NEAR(ev[0], 1.0, 1e-14);
  EXPECT_NEAR(ev[1], 0.0, 1e-14);
}

TEST(QMRef, UnequalCoefficients) {
  const auto q = two_term(std::sqrt(3.0), 1.0);
  EXPECT_TRUE(has_two_term_form(q));
  EXPECT_NEAR(qm_renyi(q, 2).trace_power, 0.625, 1e-15);
  EXPECT_NEAR(qm_renyi(q, 2).entropy, 0.470003629245736, 1e-12);
  EXPECT_NEAR(qm_renyi_spectral(q, 2).entropy, 0.470003629245736, 1e-12);
}

TEST(QMRef, ZeroCoefficient) {
  for (double n : {1.0, 2.0, 3.0}) EXPECT_EQ(qm_renyi(two_term(1.0, 0.0), n).entropy, 0.0);
}

TEST(QMRef, Validation) {
  EXPECT_THROW(validate(QMState{2, 2, {}}), ConfigError);
  EXPECT_THROW(validate(QMState{2, 2, {{1.0, 2, 0}}}), ConfigError);
  EXPECT_THROW(qm_density_matrix(QMState{2, 2, {{0.0, 0, 0}}}), NumericalError);
}

TEST(QMRef, ClosedFormMatchesSpectral) {
  for (double ar : {0.0, 0.1, 0.5, 1.0, 1.7, 3.0}) {
    for (double phase : {0.0, 0.9, 2.5}) {
      const auto q = two_term(std::polar(ar, phase), cplx(0.7, -0.2));
      for (double n : {0.5, 1.0, 2.0, 3.0, 4.5}) {
        EXPECT_NEAR(qm_renyi(q, n).entropy, qm_renyi_spectral(q, n).entropy, 1e-12) << ar << " " << n;
      }
    }
  }
}

TEST(QMRef, MaximumAtEqualWeights) {
  double best = -1.0;
  double argmax = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double r = i / 100.0;
    const double s = qm_renyi(two_term(r, 1.0), 2).entropy;
    if (s > best) {
      best = s;
      argmax = r;
    }
  }
  EXPECT_NEAR(argmax, 1.0, 1e-12);
  EXPECT_NEAR(best, kLog2, 1e-14);
}

TEST(QMRef, CompareVacuumTrivial) {
  const auto report = report_from({1.0, 0.0}, {1.0, 0.0}, {1, 2, 3});
  const auto rec = compare(report, QMState{1, 1, {{1.0, 0, 0}}});
  for (const auto& o : rec.orders) EXPECT_EQ(o.delta, 0.0);
  EXPECT_TRUE(std::isnan(rec.norm_deviation));
  ASSERT_NE(rec.find(1.0), nullptr);
}

TEST(QMRef, CompareResiduals) {
  const auto report = report_from({0.5, 0.3, 0.2}, {0.9, 0.1, 0.0}, {2, 3});
  const auto q = two_term(1.0, 1.0);
  const auto rec = compare(report, q, std::sqrt(2.0));
  EXPECT_NEAR(rec.norm_deviation, 0.0, 1e-15);
  const auto* o2 = rec.find(2.0);
  ASSERT_NE(o2, nullptr);
  const double s2 = -std::log(0.25 + 0.09 + 0.04) + std::log(0.81 + 0.01);
  EXPECT_NEAR(o2->subtracted, s2, 1e-14);
  EXPECT_NEAR(o2->delta, std::abs(s2 - kLog2), 1e-14);
  EXPECT_NEAR(o2->delta_trace_power, std::abs(0.38 - 0.82 * 0.5), 1e-14);
  EXPECT_NEAR(rec.vacuum_s2, -std::log(0.82), 1e-14);
  EXPECT_THROW(compare(report, q, std::nullopt, {4}), ConfigError);
}

TEST(QMRef, DeltaInvariantUnderPhaseAndScale) {
  const auto report = report_from({0.55, 0.45}, {1.0, 0.0}, {1, 2, 3});
  const auto base = compare(report, two_term(0.8, 0.6));
  const cplx c = std::polar(2.5, 0.7);
  const auto scaled = compare(report, two_term(c * 0.8, c * cplx(0.6, 0.0)));
  const auto rephased = compare(report, two_term(0.8, std::polar(0.6, 1.3)));
  for (std::size_t i = 0; i < base.orders.size(); ++i) {
    EXPECT_NEAR(base.orders[i].delta, scaled.orders[i].delta, 1e-13);
    EXPECT_NEAR(base.orders[i].delta, rephased.orders[i].delta, 1e-13);
  }
}
