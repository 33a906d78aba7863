#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bhlab/errors.hpp"
#include "bhlab/qsim.hpp"

namespace bhlab {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(QRegisterTest, InitBasisAndPlus) {
  QRegister reg(1);
  EXPECT_EQ(reg.amplitudes(), (std::vector<double>{1.0, 0.0}));
  reg.init_plus(0);
  EXPECT_NEAR(reg.amplitudes()[0], 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(reg.amplitudes()[1], 1 / std::sqrt(2.0), 1e-15);
  const auto branches = reg.measure_branches(0);
  ASSERT_EQ(branches.size(), 2u);
  EXPECT_NEAR(branches[0].probability, 0.5, 1e-12);
  EXPECT_NEAR(branches[1].probability, 0.5, 1e-12);
  EXPECT_THROW(reg.init_plus(1), IndexOutOfRange);
  EXPECT_THROW(QRegister(0), IndexOutOfRange);
  EXPECT_THROW(QRegister(21), IndexOutOfRange);
}

TEST(QRegisterTest, Rotations) {
  QRegister reg(1);
  for (int i = 0; i < 4; ++i) reg.rotate(0, kPi / 4);
  EXPECT_NEAR(reg.amplitudes()[0], -1.0, 1e-12);
  EXPECT_NEAR(reg.probability_one(0), 0.0, 1e-12);

  QRegister quarter(1);
  quarter.rotate(0, kPi / 2);
  EXPECT_NEAR(quarter.probability_one(0), 1.0, 1e-12);

  QRegister same(2);
  same.init_plus(1);
  const auto before = same.amplitudes();
  same.rotate(0, 0.0);
  EXPECT_EQ(same.amplitudes(), before);
  EXPECT_THROW(same.rotate(2, 0.1), IndexOutOfRange);
}

TEST(QRegisterTest, XorFlip) {
  QRegister reg(1);
  reg.xor_flip(0, 1);
  EXPECT_EQ(reg.amplitudes(), (std::vector<double>{0.0, 1.0}));
  reg.xor_flip(0, 0);
  EXPECT_EQ(reg.amplitudes(), (std::vector<double>{0.0, 1.0}));

  QRegister plus(1);
  plus.init_plus(0);
  plus.xor_flip(0, 1);
  EXPECT_NEAR(plus.probability_one(0), 0.5, 1e-15);
}

TEST(QRegisterTest, MeasureBranches) {
  QRegister one(1);
  one.xor_flip(0, 1);
  const auto certain = one.measure_branches(0);
  ASSERT_EQ(certain.size(), 1u);
  EXPECT_EQ(certain[0].outcome, 1);
  EXPECT_DOUBLE_EQ(certain[0].probability, 1.0);

  QRegister reg(1);
  reg.rotate(0, std::acos(0.6));  // amplitudes (0.6, 0.8)
  EXPECT_NEAR(reg.probability_one(0), 0.64, 1e-12);
  const auto branches = reg.measure_branches(0);
  ASSERT_EQ(branches.size(), 2u);
  EXPECT_NEAR(branches[0].collapsed.amplitudes()[0], 1.0, 1e-15);
  EXPECT_NEAR(branches[0].collapsed.amplitudes()[1], 0.0, 1e-15);
  EXPECT_NEAR(branches[1].collapsed.amplitudes()[1], 1.0, 1e-15);
}

TEST(QRegisterTest, MeasureCollapsesThroughChoices) {
  QRegister reg(2);
  reg.init_plus(0);
  reg.init_plus(1);
  ReplayChoices choices({1});
  const auto [outcome, p] = reg.measure(1, choices);
  EXPECT_EQ(outcome, 1);
  EXPECT_NEAR(p, 0.5, 1e-12);
  EXPECT_NEAR(reg.probability_one(1), 1.0, 1e-12);
  EXPECT_NEAR(reg.probability_one(0), 0.5, 1e-12);
  EXPECT_NEAR(reg.norm_squared(), 1.0, 1e-12);
}

TEST(QRegisterTest, Reset) {
  QRegister reg(3);
  reg.xor_flip(0, 1);
  reg.xor_flip(2, 1);
  reg.reset_all();
  EXPECT_EQ(reg.amplitudes()[0], 1.0);

  QRegister zero(3);
  zero.reset_all();
  EXPECT_EQ(zero.amplitudes()[0], 1.0);

  QRegister mixed(2);
  mixed.init_plus(1);
  EXPECT_THROW(mixed.reset_all(), NotBasisState);

  // Subregister reset leaves the other qubit alone.
  QRegister part(2);
  part.init_plus(0);
  part.xor_flip(1, 1);
  const std::size_t q[] = {1};
  const Bit known[] = {1};
  part.reset(q, known);
  EXPECT_NEAR(part.probability_one(1), 0.0, 1e-15);
  EXPECT_NEAR(part.probability_one(0), 0.5, 1e-15);
  const Bit wrong[] = {1};
  EXPECT_THROW(part.reset(q, wrong), NotBasisState);
}

TEST(QRegisterTest, RotateInverseProperty) {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    QRegister reg(3);
    for (std::size_t q = 0; q < 3; ++q) reg.rotate(q, rng.uniform01() * 2 * kPi);
    const auto before = reg.amplitudes();
    const auto qubit = static_cast<std::size_t>(rng.uniform_int(0, 2));
    const double angle = (rng.uniform01() - 0.5) * 8 * kPi;
    reg.rotate(qubit, angle);
    reg.rotate(qubit, -angle);
    for (std::size_t i = 0; i < before.size(); ++i) ASSERT_NEAR(reg.amplitudes()[i], before[i], 1e-9);
  }
}

TEST(QRegisterTest, BranchProbabilitiesSumToOne) {
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    QRegister reg(4);
    for (int op = 0; op < 8; ++op)
      reg.rotate(static_cast<std::size_t>(rng.uniform_int(0, 3)), rng.uniform01() * 2 * kPi);
    const auto branches = reg.measure_branches(static_cast<std::size_t>(rng.uniform_int(0, 3)));
    double total = 0.0;
    for (const auto& b : branches) {
      total += b.probability;
      ASSERT_NEAR(b.collapsed.norm_squared(), 1.0, 1e-9);
    }
    ASSERT_NEAR(total, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace bhlab
