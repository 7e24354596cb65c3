#include <gtest/gtest.h>

#include <cmath>

#include "phidiv/errors.hpp"
#include "phidiv/phi_family.hpp"

using namespace phidiv;

namespace {

const std::vector<double> kAlphas{-0.99, -0.9, -0.75, -0.5, -0.25, -0.1};
const std::vector<double> kLambdas{-0.99, -1.2, -1.5, -1.75, -2.0, -2.5};

std::vector<PhiFamily> builtin_families() {
  std::vector<PhiFamily> out{make_log_family()};
  for (double a : kAlphas) out.push_back(make_alpha_family(a));
  for (double l : kLambdas) out.push_back(make_power_family(l));
  return out;
}

}  // namespace

TEST(AlphaFamily, VanishesAtOne) {
  for (double a : {-0.99, -0.5, 0.0, 0.5, 0.99}) EXPECT_EQ(make_alpha_family(a)(0.0), 0.0);
}

TEST(AlphaFamily, Constants) {
  const PhiFamily f = make_alpha_family(-0.99);
  EXPECT_NEAR(f.C_phi, -1.0050251256281406, 1e-12);
  EXPECT_EQ(f.K_phi, 1.0);
  EXPECT_EQ(f.case_tag, PhiCase::c_and_k);
  EXPECT_EQ(f.kind, PhiKind::alpha);
  EXPECT_EQ(f.param, -0.99);
}

TEST(AlphaFamily, MatchesDefinitionOnRatioScale) {
  for (double a : {-0.5, 0.3}) {
    const PhiFamily f = make_alpha_family(a);
    for (double x : {0.1, 0.5, 2.0, 7.0}) {
      EXPECT_NEAR(f.at(x), 4.0 * (1.0 - std::pow(x, (1.0 + a) / 2.0)) / (1.0 - a * a), 1e-13);
    }
  }
}

TEST(AlphaFamily, SecondDerivativeIsOne) {
  for (double a : {-0.9, -0.5, -0.1}) {
    EXPECT_NEAR(phi_derivatives_at_one(make_alpha_family(a)).second, 1.0, 1e-4);
  }
}

TEST(AlphaFamily, DomainChecked) {
  EXPECT_THROW(make_alpha_family(1.0), InvalidPhiError);
  EXPECT_THROW(make_alpha_family(-1.0), InvalidPhiError);
  EXPECT_THROW(make_alpha_family(1.5), InvalidPhiError);
  EXPECT_THROW(make_alpha_family(std::nan("")), InvalidPhiError);
}

TEST(PowerFamily, VanishesAtOneAndConstants) {
  for (double l : kLambdas) {
    const PhiFamily f = make_power_family(l);
    EXPECT_EQ(f(0.0), 0.0);
    EXPECT_EQ(f.C_phi, 0.0);
    EXPECT_EQ(f.K_phi, 1.0);
    EXPECT_EQ(f.case_tag, PhiCase::k_only);
  }
}

TEST(PowerFamily, FiniteDifferenceConstants) {
  for (double l : {-0.99, -1.5, -2.5}) {
    const PhiDerivatives d = phi_derivatives_at_one(make_power_family(l));
    EXPECT_NEAR(d.first, 0.0, 1e-4);
    EXPECT_NEAR(d.second, 1.0, 1e-4);
  }
}

TEST(PowerFamily, LambdaOneIsHalfSquaredDistance) {
  EXPECT_NEAR(make_power_family(1.0)(std::log(2.0)), 0.5, 1e-14);
  for (double x : {0.3, 1.7, 4.0}) {
    EXPECT_NEAR(make_power_family(1.0).at(x), 0.5 * (x - 1) * (x - 1), 1e-13);
  }
}

TEST(PowerFamily, DegenerateLambdaRejected) {
  EXPECT_THROW(make_power_family(0.0), InvalidPhiError);
  EXPECT_THROW(make_power_family(-1.0), InvalidPhiError);
}

TEST(LogFamily, Values) {
  const PhiFamily f = make_log_family();
  EXPECT_EQ(f(0.0), 0.0);
  EXPECT_EQ(f(-2.0), 2.0);
  EXPECT_EQ(f.C_phi, -1.0);
  EXPECT_EQ(f.K_phi, 1.0);
  const PhiDerivatives d = phi_derivatives_at_one(f);
  EXPECT_NEAR(d.first, -1.0, 1e-4);
  EXPECT_NEAR(d.second, 1.0, 1e-4);
}

TEST(CustomFamily, NegativeLogMatchesLogFamily) {
  const PhiFamily f = make_custom_family([](double x) { return -std::log(x); }, "neglog");
  EXPECT_NEAR(f.C_phi, -1.0, 1e-4);
  EXPECT_NEAR(f.K_phi, 1.0, 1e-4);
  EXPECT_EQ(f.case_tag, PhiCase::c_and_k);
  EXPECT_NEAR(f(-1.3), 1.3, 1e-12);
}

TEST(CustomFamily, SquaredDistance) {
  const PhiFamily f = make_custom_family([](double x) { return (x - 1) * (x - 1); }, "sq");
  EXPECT_NEAR(f.C_phi, 0.0, 1e-4);
  EXPECT_NEAR(f.K_phi, 2.0, 1e-4);
  EXPECT_EQ(f.case_tag, PhiCase::k_only);
}

TEST(CustomFamily, LinearIsCOnly) {
  const PhiFamily f = make_custom_family([](double x) { return x - 1; }, "lin");
  EXPECT_NEAR(f.C_phi, 1.0, 1e-4);
  EXPECT_NEAR(f.K_phi, 0.0, 1e-4);
  EXPECT_EQ(f.case_tag, PhiCase::c_only);
}

TEST(CustomFamily, OverrideAndValidation) {
  const PhiFamily f =
      make_custom_family([](double x) { return -std::log(x); }, "neglog", PhiCase::c_only);
  EXPECT_EQ(f.case_tag, PhiCase::c_only);
  EXPECT_THROW(make_custom_family([](double x) { return x; }, "bad"), InvalidPhiError);
  EXPECT_THROW(make_custom_family(nullptr, "none"), InvalidPhiError);
}

TEST(PhiFamilies, StoredConstantsMatchFiniteDifferences) {
  for (const PhiFamily& f : builtin_families()) {
    const PhiDerivatives d = phi_derivatives_at_one(f);
    EXPECT_NEAR(d.first, f.C_phi, 1e-4) << f.name;
    EXPECT_NEAR(d.second, f.K_phi, 1e-4) << f.name;
  }
}

TEST(PhiFamilies, NonnegativeOnSwappedSide) {
  for (const PhiFamily& f : builtin_families()) {
    EXPECT_EQ(f(0.0), 0.0) << f.name;
    for (double r = -0.001; r > -600; r *= 1.7) {
      const double v = f(r);
      EXPECT_GT(v, 0.0) << f.name << " r=" << r;
      // Power families with l < -1 grow like e^{|l+1||r|} and may overflow to +inf.
      EXPECT_FALSE(std::isnan(v)) << f.name << " r=" << r;
    }
  }
}

TEST(PhiFamilies, StrictlyDecreasingForLogAndAlpha) {
  std::vector<PhiFamily> fams{make_log_family()};
  for (double a : kAlphas) fams.push_back(make_alpha_family(a));
  for (const PhiFamily& f : fams) {
    double previous = f(0.0);
    for (double r = -0.01; r >= -30.0; r -= 0.01) {
      const double v = f(r);
      EXPECT_GT(v, previous) << f.name << " r=" << r;
      previous = v;
    }
  }
}

TEST(PhiFamilies, StableAtExtremeLogRatios) {
  for (double r : {-700.0, 700.0}) {
    EXPECT_TRUE(std::isfinite(make_log_family()(r)));
    for (double a : kAlphas) EXPECT_TRUE(std::isfinite(make_alpha_family(a)(r))) << a << ' ' << r;
  }
  for (double l : kLambdas) {
    const double r = -700.0 / std::abs(l + 1.0);
    EXPECT_TRUE(std::isfinite(make_power_family(l)(r))) << l;
  }
}

TEST(ParsePhiSpec, AcceptsAndRejects) {
  EXPECT_EQ(parse_phi_spec("log").kind, PhiKind::log);
  const PhiFamily a = parse_phi_spec("alpha:-0.5");
  EXPECT_EQ(a.kind, PhiKind::alpha);
  EXPECT_EQ(a.param, -0.5);
  EXPECT_EQ(parse_phi_spec("power:-1.5").param, -1.5);
  EXPECT_THROW(parse_phi_spec("alpha:1.5"), InvalidPhiError);
  EXPECT_THROW(parse_phi_spec("alpha:"), InvalidPhiError);
  EXPECT_THROW(parse_phi_spec("alpha:-0.5x"), InvalidPhiError);
  EXPECT_THROW(parse_phi_spec("power:0"), InvalidPhiError);
  EXPECT_THROW(parse_phi_spec("renyi:2"), InvalidPhiError);
  EXPECT_THROW(parse_phi_spec(""), InvalidPhiError);
}

TEST(PhiCaseNames, ToString) {
  EXPECT_STREQ(to_string(PhiCase::c_only), "C-only");
  EXPECT_STREQ(to_string(PhiCase::k_only), "K-only");
  EXPECT_STREQ(to_string(PhiCase::c_and_k), "C-and-K");
}
