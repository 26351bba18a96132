#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "wvlab/error.hpp"
#include "wvlab/weak_values.hpp"

using namespace wvlab;

namespace {

const Matrix kSigmaX{{0, 1}, {1, 0}};
const Matrix kSigmaZ{{1, 0}, {0, -1}};
const double kH = 1.0 / std::sqrt(2.0);

Matrix random_operator(std::size_t d, Rng &rng, bool hermitian) {
    if (hermitian) {
        return random_hermitian_unit_radius(d, rng);
    }
    Matrix g = random_ginibre(d, d, rng);
    return g * (1.0 / g.frobenius_norm());
}

}  // namespace

TEST(WeakValue, SpecInstances) {
    const auto plus = QuantumState::pure({kH, kH});
    const auto w = weak_value(Observable(kSigmaZ), Ket{1, 0}, plus);
    ASSERT_TRUE(w);
    EXPECT_NEAR(std::abs(*w - 1.0), 0.0, 1e-15);

    const double s = 1.0 / std::sqrt(10.0);
    const auto anomalous = weak_value(Observable(kSigmaX), Ket{s, 3 * s}, QuantumState::pure({1, 0}));
    ASSERT_TRUE(anomalous);
    EXPECT_NEAR(std::abs(*anomalous - 3.0), 0.0, 1e-14);
}

TEST(WeakValue, IdentityObservableGivesOne) {
    Rng rng(31);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const auto psi = random_pure_state(d, rng);
        const Ket post = random_pure_state(d, rng).ket();
        const auto w = weak_value(Observable(Matrix::identity(d)), post, psi);
        ASSERT_TRUE(w);
        EXPECT_NEAR(std::abs(*w - 1.0), 0.0, 1e-12);
    }
}

TEST(WeakValue, MatchesOracle) {
    Rng rng(32);
    for (int t = 0; t < 500; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Matrix a = random_operator(d, rng, t % 2 == 0);
        const auto psi = random_pure_state(d, rng);
        const Ket post = random_pure_state(d, rng).ket();
        const auto w = weak_value(Observable(a), post, psi);
        const auto expected = oracle::weak_value(oracle::from(a), post, psi.ket());
        ASSERT_TRUE(w);
        EXPECT_LE(std::abs(*w - expected), 1e-10 * std::max(1.0, std::abs(expected)));
    }
}

TEST(WeakValue, UndefinedBelowGuard) {
    const auto zero = QuantumState::pure({1, 0});
    EXPECT_FALSE(weak_value(Observable(kSigmaX), Ket{0, 1}, zero));
    // p(m) = 1e-13 < 1e-12
    const double eps = std::sqrt(1e-13);
    const Ket post{eps, std::sqrt(1 - eps * eps)};
    EXPECT_FALSE(weak_value(Observable(kSigmaX), post, zero));
    EXPECT_TRUE(weak_value(Observable(kSigmaX), post, zero, 1e-14));
    const auto rho = QuantumState::mixed(zero.density());
    EXPECT_FALSE(weak_value(Observable(kSigmaX), Matrix::outer(Ket{0, 1}, Ket{0, 1}), rho));
}

TEST(WeakValue, DimensionMismatch) {
    try {
        weak_value(Observable(kSigmaX), Ket{1, 0, 0}, QuantumState::pure({1, 0}));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(WeakValue, EigenstateGivesEigenvalue) {
    Rng rng(33);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Matrix a = random_hermitian_unit_radius(d, rng);
        const auto eig = hermitian_eigendecomposition(a);
        const std::size_t k = rng.uniform_index(0, d - 1);
        const auto psi = QuantumState::pure_normalized(eig.eigenvectors.col(k));
        const auto table = weak_value_table(Observable(a), random_rank1_povm(d, rng), psi);
        for (const auto &row : table.rows) {
            if (row.defined) {
                EXPECT_LE(std::abs(row.weak_value - eig.eigenvalues[k]), 1e-9 / std::sqrt(row.probability));
            }
        }
    }
}

TEST(WeakValue, LinearityPerOutcome) {
    Rng rng(34);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Matrix a = random_operator(d, rng, true);
        const Matrix b = random_operator(d, rng, false);
        const auto psi = random_pure_state(d, rng);
        const auto m = random_rank1_povm(d, rng);
        for (const auto &post : m.basis()) {
            const auto ws = weak_value(Observable(a + b), post, psi);
            const auto wa = weak_value(Observable(a), post, psi);
            const auto wb = weak_value(Observable(b), post, psi);
            if (ws && wa && wb) {
                ASSERT_LE(std::abs(*ws - (*wa + *wb)), 1e-10);
            }
        }
    }
}

TEST(WeakValue, DensityFormAgreesWithStateVectorForm) {
    Rng rng(35);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Observable a(random_operator(d, rng, t % 2 == 0));
        const auto psi = random_pure_state(d, rng);
        const auto rho = QuantumState::mixed(psi.density());
        const auto m = random_rank1_povm(d, rng);
        for (std::size_t i = 0; i < m.size(); ++i) {
            const auto pure = weak_value(a, m.basis()[i], psi);
            const auto mixed = weak_value(a, m.element(i), rho);
            ASSERT_EQ(pure.has_value(), mixed.has_value());
            if (pure && std::norm(inner(m.basis()[i], psi.ket())) > 1e-3) {
                worst = std::max(worst, std::abs(*pure - *mixed));
            }
        }
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(Table, SigmaZOnPlus) {
    const auto table =
        weak_value_table(Observable(kSigmaZ), MeasurementModel::computational(2), QuantumState::pure({kH, kH}));
    ASSERT_EQ(table.rows.size(), 2u);
    EXPECT_NEAR(std::abs(table.rows[0].weak_value - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(table.rows[1].weak_value + 1.0), 0.0, 1e-15);
    EXPECT_NEAR(table.rows[0].probability, 0.5, 1e-15);
    EXPECT_NEAR(std::abs(table.average()), 0.0, 1e-15);
    EXPECT_TRUE(table.all_defined());
    EXPECT_NEAR(table.total_probability(), 1.0, 1e-15);
}

TEST(Table, ProbabilitiesSumToOne) {
    Rng rng(36);
    for (int t = 0; t < 200; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const auto state = t % 2 ? random_pure_state(d, rng) : random_density_operator(d, rng.uniform_index(1, d), rng);
        const auto table = weak_value_table(Observable(random_operator(d, rng, true)), random_rank1_povm(d, rng), state);
        EXPECT_NEAR(table.total_probability(), 1.0, 1e-10);
        for (const auto &row : table.rows) {
            EXPECT_EQ(row.defined, row.probability >= kDenominatorGuard);
        }
    }
}

TEST(Reconstruction, AverageOverRandomInstances) {
    Rng rng(37);
    for (int t = 0; t < 10000; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Observable a(random_operator(d, rng, t % 3 != 0));
        const auto psi = random_pure_state(d, rng);
        const auto r = average_reconstruction_check(a, random_rank1_povm(d, rng), psi);
        ASSERT_TRUE(r.held()) << "trial " << t << " residual " << r.residual();
        ASSERT_LE(r.residual(), 1e-9);
    }
}

TEST(Product, SpecInstances) {
    const auto plus = QuantumState::pure({kH, kH});
    const auto comp = MeasurementModel::computational(2);
    const auto r = product_representation_check(Observable(kSigmaZ), Observable(kSigmaZ), comp, plus);
    EXPECT_TRUE(r.held());
    EXPECT_NEAR(std::abs(r.lhs - 1.0), 0.0, 1e-15);

    Rng rng(38);
    const Observable a(random_hermitian_unit_radius(3, rng));
    const auto psi = random_pure_state(3, rng);
    const auto m = random_rank1_povm(3, rng);
    const auto with_identity = product_representation_check(a, Observable(Matrix::identity(3)), m, psi);
    const auto average = average_reconstruction_check(a, m, psi);
    EXPECT_LE(std::abs(with_identity.lhs - average.lhs), 1e-12);
    EXPECT_LE(std::abs(with_identity.rhs - average.rhs), 1e-12);
}

TEST(Product, LadderOperators) {
    Rng rng(39);
    const Observable a = truncated_annihilation(10);
    const Observable ad(a.matrix().adjoint());
    for (int t = 0; t < 100; ++t) {
        const auto psi = random_pure_state(10, rng);
        const auto m = random_rank1_povm(10, rng);
        const auto r = product_representation_check(a, ad, m, psi);
        const auto direct = oracle::expect(psi, oracle::mul(oracle::dag(oracle::from(a.matrix())),
                                                            oracle::from(ad.matrix())));
        EXPECT_LE(std::abs(r.rhs - direct), 1e-12);
        EXPECT_LE(r.residual(), 1e-9);
    }
}

TEST(Product, MixedStateRejected) {
    try {
        product_representation_check(Observable(kSigmaZ), Observable(kSigmaZ), MeasurementModel::computational(2),
                                     QuantumState::mixed(0.5 * Matrix::identity(2)));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidState);
    }
}

TEST(Product, InconclusiveWhenUndefinedOutcomeCarriesWeight) {
    // At |0>, outcome |1> has p = 0 but <1|sigma_x|0> = 1: the sum over
    // defined outcomes misses <sigma_x^2> entirely.
    const auto zero = QuantumState::pure({1, 0});
    const Observable sx(kSigmaX);
    const auto comp = MeasurementModel::computational(2);
    EXPECT_NEAR(undefined_outcome_weight(sx, comp, zero), 1.0, 1e-15);
    const auto r = product_representation_check(sx, sx, comp, zero);
    EXPECT_EQ(r.verdict, Verdict::Inconclusive);
    EXPECT_NEAR(std::abs(r.rhs - 1.0), 0.0, 1e-15);

    // sigma_z keeps |0> inside the defined outcome.
    const Observable sz(kSigmaZ);
    EXPECT_EQ(undefined_outcome_weight(sz, comp, zero), 0.0);
    EXPECT_TRUE(product_representation_check(sz, sz, comp, zero).held());

    // A guard above 1 leaves no defined outcome.
    const auto none = product_representation_check(sz, sz, comp, zero, 1e-9, 2.0);
    EXPECT_EQ(none.verdict, Verdict::Inconclusive);
}

TEST(Estimate, OptimalAndOffsets) {
    Rng rng(40);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Observable a(random_operator(d, rng, t % 2 == 0));
        const auto psi = random_pure_state(d, rng);
        const auto m = random_rank1_povm(d, rng);
        const auto opt = optimal_estimate(a, m, psi);
        ASSERT_LE(opt.mean_square_deviation, 1e-12);
        ASSERT_LE(estimate_mse_direct(opt.estimates, a, m, psi), 1e-12);

        const auto table = weak_value_table(a, m, psi);
        std::vector<Complex> real_part, offset;
        double expected = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            real_part.push_back(opt.estimates[i].real());
            offset.push_back(opt.estimates[i] + 1.0);
            expected += table.rows[i].probability * std::pow(table.rows[i].weak_value.imag(), 2);
        }
        ASSERT_NEAR(estimate_mse(real_part, a, m, psi), expected, 1e-10);
        ASSERT_NEAR(estimate_mse(offset, a, m, psi), 1.0, 1e-10);
        ASSERT_NEAR(estimate_mse_direct(offset, a, m, psi), 1.0, 1e-10);
    }
}

TEST(Estimate, DeviationIsPositiveAndMonotone) {
    Rng rng(41);
    for (int t = 0; t < 1000; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Observable a(random_operator(d, rng, true));
        const auto psi = random_pure_state(d, rng);
        const auto m = random_rank1_povm(d, rng);
        auto est = optimal_estimate(a, m, psi).estimates;
        for (auto &z : est) {
            z += 0.1 * rng.complex_normal();
        }
        const double e0 = estimate_mse(est, a, m, psi);
        ASSERT_GT(e0, 0.0);
        ASSERT_NEAR(e0, estimate_mse_direct(est, a, m, psi), 1e-12);
        const auto table = weak_value_table(a, m, psi);
        const std::size_t k = rng.uniform_index(0, d - 1);
        est[k] += 0.25 * (table.rows[k].weak_value - est[k]);
        ASSERT_LT(estimate_mse(est, a, m, psi), e0);
    }
}

TEST(Triple, CommutingDiagonalFamilyHasNoDiscrepancy) {
    Rng rng(42);
    for (int t = 0; t < 100; ++t) {
        const std::size_t d = rng.uniform_index(2, 5);
        std::vector<double> x(d), y(d), z(d);
        for (std::size_t i = 0; i < d; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
            z[i] = rng.normal();
        }
        const auto inst = evaluate_triple_product(
            Matrix::diagonal(std::span<const double>(x)), Matrix::diagonal(std::span<const double>(y)),
            Matrix::diagonal(std::span<const double>(z)), random_pure_state(d, rng), MeasurementModel::computational(d));
        EXPECT_LE(inst.discrepancy, 1e-12);
    }
}

TEST(Triple, CounterexampleSearch) {
    const auto found = triple_product_counterexample(2, 100, 42, 0.01);
    ASSERT_TRUE(found);
    EXPECT_GT(found->discrepancy, 0.01);
    const auto replay = triple_product_trial(2, found->seed);
    EXPECT_EQ(replay.discrepancy, found->discrepancy);
    EXPECT_EQ(replay.weak_side, found->weak_side);
    EXPECT_EQ(replay.a, found->a);

    // Both sides recomputed with the oracle.
    const auto a = oracle::from(found->a), b = oracle::from(found->b), c = oracle::from(found->c);
    oracle::C weak{};
    for (std::size_t m = 0; m < 2; ++m) {
        const Ket post = found->basis.col(m);
        const double p = std::norm(oracle::dot(post, found->psi));
        weak += p * std::conj(oracle::weak_value(a, post, found->psi)) * oracle::weak_value(b, post, found->psi) *
                oracle::weak_value(c, post, found->psi);
    }
    const auto quantum = oracle::sandwich(found->psi, oracle::mul(oracle::mul(oracle::dag(a), b), c), found->psi);
    EXPECT_LE(std::abs(weak - found->weak_side), 1e-10);
    EXPECT_LE(std::abs(quantum - found->quantum_side), 1e-12);

    EXPECT_FALSE(triple_product_counterexample(2, 100, 42, 1e9));
}
