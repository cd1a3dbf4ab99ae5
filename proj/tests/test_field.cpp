#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "oplm/field.hpp"
#include "oplm/io.hpp"

using oplm::BigRational;
using oplm::CycNum;

namespace {

const CycNum w = CycNum::omega();

std::complex<double> embed(const CycNum& z) {
  // u + v * (-1/2 + i sqrt(3)/2), written out independently of to_complex()
  const double u = z.u().to_double();
  const double v = z.v().to_double();
  return {u - v / 2.0, v * std::sqrt(3.0) / 2.0};
}

CycNum random_cyc(std::mt19937& rng, bool allow_fractions = true) {
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, allow_fractions ? 7 : 1);
  return {BigRational(num(rng), den(rng)), BigRational(num(rng), den(rng))};
}

}  // namespace

TEST(BigRational, CanonicalForm) {
  const BigRational r(6, -4);
  EXPECT_EQ(r.numerator(), -3);
  EXPECT_EQ(r.denominator(), 2);
  EXPECT_EQ(r.str(), "-3/2");
  EXPECT_EQ(BigRational::parse("10/4").str(), "5/2");
  EXPECT_EQ(BigRational::parse("-7").str(), "-7");
  EXPECT_THROW(BigRational::parse("1/0"), std::domain_error);
  EXPECT_THROW(BigRational::parse("x/2"), std::invalid_argument);
  EXPECT_THROW(BigRational::parse(""), std::invalid_argument);
}

TEST(CycAdd, Examples) {
  EXPECT_EQ(oplm::cyc_add(CycNum(1), w), CycNum(1, 1));
  EXPECT_EQ(oplm::cyc_add(CycNum(1, 1), CycNum(0, -1)), CycNum(1, 0));
  // 1 + w + w^2 = 0
  EXPECT_TRUE((CycNum(1) + w + CycNum(-1, -1)).is_zero());
}

TEST(CycMul, Examples) {
  EXPECT_EQ(oplm::cyc_mul(w, w), CycNum(-1, -1));
  EXPECT_EQ(oplm::cyc_mul(w, CycNum(-1, -1)), CycNum(1, 0));
  const CycNum one_plus_w(1, 1);
  const CycNum sq = one_plus_w * one_plus_w;
  EXPECT_EQ(sq, w);
  // floating cross-check of the same product
  const auto f = embed(one_plus_w) * embed(one_plus_w);
  EXPECT_NEAR(std::abs(f - embed(w)), 0.0, 1e-12);
  EXPECT_EQ(CycNum::omega_pow(3), CycNum(1));
  EXPECT_EQ(CycNum::omega_pow(-1), CycNum::omega_pow(2));
}

TEST(CycConj, Examples) {
  EXPECT_EQ(oplm::cyc_conj(w), CycNum(-1, -1));
  EXPECT_EQ(oplm::cyc_conj(CycNum(1)), CycNum(1));
  const CycNum z(2, 3);
  EXPECT_EQ(oplm::cyc_conj(z), CycNum(-1, -3));
  EXPECT_NEAR(std::abs(std::conj(embed(z)) - embed(CycNum(-1, -3))), 0.0, 1e-12);
}

TEST(CycIsReal, Examples) {
  EXPECT_TRUE(oplm::cyc_is_real(CycNum(BigRational(5, 2), 0)));
  EXPECT_FALSE(oplm::cyc_is_real(w));
  EXPECT_TRUE(oplm::cyc_is_real(w + w.conj()));
  EXPECT_EQ(w + w.conj(), CycNum(-1));
}

TEST(CycNum, InverseOfZeroThrows) { EXPECT_THROW(CycNum().inverse(), std::domain_error); }

TEST(CycNumProperty, FieldAxioms) {
  std::mt19937 rng(20240917);
  for (int trial = 0; trial < 300; ++trial) {
    const CycNum a = random_cyc(rng);
    const CycNum b = random_cyc(rng);
    const CycNum c = random_cyc(rng);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * (b + c), a * b + a * c);
    if (!a.is_zero()) {
      EXPECT_EQ(a * a.inverse(), CycNum(1));
    }
    EXPECT_EQ(a.conj().conj(), a);
    EXPECT_EQ((a * b).conj(), a.conj() * b.conj());
    EXPECT_EQ((a + b).conj(), a.conj() + b.conj());
  }
}

TEST(CycNumProperty, NormIsRealAndNonnegative) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const CycNum z = random_cyc(rng);
    const CycNum n = z * z.conj();
    EXPECT_TRUE(n.is_real());
    EXPECT_GE(n.u().sign(), 0);
    EXPECT_EQ(n.u(), z.norm());
  }
}

TEST(CycNumProperty, EmbeddingCommutesWithArithmetic) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const CycNum a = random_cyc(rng, false);
    const CycNum b = random_cyc(rng, false);
    const auto sum = embed(a) + embed(b);
    const auto prod = embed(a) * embed(b);
    const double scale_s = std::max(1.0, std::abs(sum));
    const double scale_p = std::max(1.0, std::abs(prod));
    EXPECT_LE(std::abs(embed(a + b) - sum) / scale_s, 1e-12);
    EXPECT_LE(std::abs(embed(a * b) - prod) / scale_p, 1e-12);
    EXPECT_LE(std::abs(a.to_complex() - embed(a)), 1e-12);
  }
}

TEST(CycNumJson, ScalarRoundTrip) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const CycNum z = random_cyc(rng);
    const auto j = oplm::to_json(z);
    EXPECT_EQ(oplm::cyc_from_json(j), z);
    EXPECT_EQ(oplm::to_json(oplm::cyc_from_json(j)).dump(), j.dump());
  }
  EXPECT_EQ(oplm::to_json(CycNum(BigRational(-3, 6), 2)).dump(), R"({"u":"-1/2","v":"2"})");
  EXPECT_THROW(oplm::cyc_from_json(oplm::Json{{"u", "1/0"}, {"v", "0"}}), oplm::ParseError);
}
