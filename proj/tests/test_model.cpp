#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include <phchain/model.hpp>

#include "oracles.hpp"

using namespace phchain;
using phchain::testing::Cx;
using phchain::testing::RandomModels;

TEST(Diagonal, PaperMatrices) {
    EXPECT_EQ(diagonal(1), (std::vector<double>{-1, 1}));
    EXPECT_EQ(diagonal(2), (std::vector<double>{-3, -1, 1, 3}));
    EXPECT_EQ(diagonal(3), (std::vector<double>{-5, -3, -1, 1, 3, 5}));
}

TEST(Diagonal, SumsToZero) {
    for (int J = 1; J <= 12; ++J) {
        double sum = 0.0;
        for (double d : diagonal(J)) sum += d;
        EXPECT_EQ(sum, 0.0) << "J=" << J;
    }
    EXPECT_THROW(diagonal(0), std::invalid_argument);
}

TEST(ChainModel, RejectsBadShapes) {
    EXPECT_THROW(ChainModel(0, {}), std::invalid_argument);
    EXPECT_THROW(ChainModel(2, {1.0}), std::invalid_argument);
    const ChainModel m(2, {1.0, 2.0});
    EXPECT_THROW(xi(m, 0, 0.1), std::out_of_range);
    EXPECT_THROW(xi(m, 3, 0.1), std::out_of_range);
}

TEST(Xi, Examples) {
    EXPECT_DOUBLE_EQ(xi(ChainModel(1, {1.0}), 1, 0.36), 0.36);
    EXPECT_DOUBLE_EQ(xi(ChainModel(2, {1.0, 1.0}), 1, 0.5), 0.75);
    EXPECT_NEAR(xi(ChainModel::uniform(3, 1.0), 2, 0.5436890127), 1.0, 1e-9);
}

TEST(Xi, EmptySumAtJ1) {
    const ChainModel m(1, {2.5});
    EXPECT_DOUBLE_EQ(xi(m, 1, 0.4), 1.0);
}

TEST(CouplingState, Examples) {
    EXPECT_DOUBLE_EQ(coupling_state(ChainModel::uniform(3, 1.0), 1, 0.0).wSigned, 5.0);

    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;  // t + t^2 = 1
    EXPECT_NEAR(coupling_state(ChainModel::uniform(2, 1.0), 2, golden).wSigned, 0.0, 1e-14);

    const auto st = coupling_state(ChainModel(1, {1.0}), 1, 2.0);
    EXPECT_EQ(st.n, 1);
    EXPECT_DOUBLE_EQ(st.xi, 2.0);
    EXPECT_DOUBLE_EQ(st.wSigned, -1.0);
}

TEST(Materialize, TwoStateAtT036) {
    const auto H = materialize(ChainModel(1, {1.0}), 0.36);
    EXPECT_NEAR(std::abs(H(0, 0) - Cx(-1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(H(0, 1) - Cx(0.8, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(H(1, 0) - Cx(-0.8, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(H(1, 1) - Cx(1, 0)), 0.0, 1e-15);
}

TEST(Materialize, FourStateAtOrigin) {
    const auto H = materialize(ChainModel::uniform(2, 1.0), 0.0);
    const double r3 = std::sqrt(3.0);
    EXPECT_DOUBLE_EQ(H(0, 1).real(), r3);
    EXPECT_DOUBLE_EQ(H(1, 0).real(), -r3);
    EXPECT_DOUBLE_EQ(H(1, 2).real(), 2.0);
    EXPECT_DOUBLE_EQ(H(2, 1).real(), -2.0);
    EXPECT_DOUBLE_EQ(H(2, 3).real(), r3);
    EXPECT_DOUBLE_EQ(H(3, 2).real(), -r3);
    EXPECT_EQ(H(0, 2), Cx(0, 0));
}

TEST(Materialize, TwoStateHermitianAtT2) {
    const auto H = materialize(ChainModel(1, {1.0}), 2.0);
    EXPECT_EQ(H(0, 1), Cx(0, 1));
    EXPECT_EQ(H(1, 0), Cx(0, -1));
    EXPECT_EQ((H - H.adjoint()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ParitySignature, StandardParityBelowBothSwitchOffs) {
    const auto sig = find_parity_signature(ChainModel(2, {1.0, 2.0}), 0.2);
    EXPECT_EQ(sig.signs, (std::vector<int>{1, -1, 1, -1}));
}

TEST(ParitySignature, AnomalousParityBetweenSwitchOffs) {
    // Central coupling switches off at t = 1/2, outer at t = 0.618...; in between
    // only the central bond is Hermitian.
    const ChainModel m(2, {1.0, 2.0});
    const auto sig = find_parity_signature(m, 0.55);
    EXPECT_EQ(sig.signs, (std::vector<int>{1, -1, -1, 1}));
    const std::vector<int> reference_anomalous{-1, 1, 1, -1};
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_EQ(sig.signs[i], -reference_anomalous[i]);
    }
    EXPECT_LT(parity_defect(materialize(m, 0.55), sig), 1e-12);
}

TEST(ParitySignature, HermitianChainHasTrivialSignature) {
    const auto sig = find_parity_signature(ChainModel(1, {1.0}), 2.0);
    EXPECT_EQ(sig.signs, (std::vector<int>{1, 1}));
}

TEST(ParitySignature, DegenerateBondThrows) {
    try {
        find_parity_signature(ChainModel(1, {1.0}), 1.0);
        FAIL() << "expected DegenerateBond";
    } catch (const DegenerateBond& e) {
        EXPECT_EQ(e.coupling(), 1);
        EXPECT_EQ(e.weight(), 0.0);
    }
}

// Properties over random models.

TEST(ModelProperties, TraceIsZero) {
    RandomModels gen(11);
    for (int i = 0; i < 500; ++i) {
        const auto m = gen.model(8, -1.0, 4.0);
        const double t = gen.uniform(-1.0, 3.0);
        EXPECT_EQ(std::abs(materialize(m, t).trace()), 0.0);
    }
}

TEST(ModelProperties, OppositeEntriesMultiplyToMinusWeight) {
    RandomModels gen(12);
    for (int i = 0; i < 500; ++i) {
        const auto m = gen.model(8, -1.0, 4.0);
        const double t = gen.uniform(-1.0, 3.0);
        const auto H = materialize(m, t);
        const int N = m.dim();
        for (int k = 1; k < N; ++k) {
            const double w = coupling_state(m, bond_coupling(k, N), t).wSigned;
            const auto prod = H(k - 1, k) * H(k, k - 1);
            ASSERT_NEAR(prod.real(), -w, 1e-12 * (1.0 + std::abs(w)));
            ASSERT_NEAR(prod.imag(), 0.0, 1e-12 * (1.0 + std::abs(w)));
        }
    }
}

TEST(ModelProperties, HermitianAboveEverySwitchOff) {
    RandomModels gen(13);
    for (int i = 0; i < 200; ++i) {
        const auto m = gen.model(6, 0.2, 4.0);
        // xi_n is increasing for t > 0 with positive G_n; xi_n(1) >= 1 unless J = 1 and G < 1.
        double t_max = 0.0;
        for (int n = 1; n <= m.half_dim(); ++n) {
            double lo = 0.0, hi = 1.0 / std::min(1.0, m.coefficient(n)) + 1.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (xi(m, n, mid) < 1.0 ? lo : hi) = mid;
            }
            t_max = std::max(t_max, hi);
        }
        const double t = t_max + gen.uniform(0.0, 2.0);
        const auto H = materialize(m, t);
        EXPECT_LE((H - H.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(ModelProperties, ParitySignatureVerifies) {
    RandomModels gen(14);
    int checked = 0;
    for (int i = 0; i < 600; ++i) {
        const auto m = gen.model(8, -1.0, 4.0);
        const double t = gen.uniform(-1.0, 3.0);
        const auto sig = find_parity_signature(m, t);
        ASSERT_EQ(sig.signs.front(), 1);
        ASSERT_LE(parity_defect(materialize(m, t), sig), 1e-12);
        ++checked;
    }
    EXPECT_GE(checked, 500);
}
