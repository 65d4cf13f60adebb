#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "slab/rng.hpp"
#include "slab/theta.hpp"
#include "slab/theta_kernel.hpp"

using namespace slab;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

constexpr double kPi = std::numbers::pi;

MatrixXcd tau_i1() {
    MatrixXcd t(1, 1);
    t(0, 0) = cdouble(0.0, 1.0);
    return t;
}

// Independent genus-1 oracle: direct sum in long double, no recentring.
std::complex<long double> oracle_theta1(std::complex<long double> tau,
                                        std::complex<long double> z, int N = 60) {
    std::complex<long double> acc = 0.0L;
    const long double pi = 3.14159265358979323846264338327950288L;
    for (int n = -N; n <= N; ++n) {
        std::complex<long double> e =
            std::complex<long double>(0.0L, pi) *
            (static_cast<long double>(n) * static_cast<long double>(n) * tau +
             2.0L * static_cast<long double>(n) * z);
        acc += std::exp(e);
    }
    return acc;
}

VectorXcd vec1(cdouble v) {
    VectorXcd z(1);
    z(0) = v;
    return z;
}

}  // namespace

TEST_CASE("validate_period_matrix") {
    CHECK(validate_period_matrix(tau_i1()).genus() == 1);

    MatrixXcd bad(2, 2);
    bad << cdouble(0, 1), cdouble(0.5, 0), cdouble(0.6, 0), cdouble(0, 1);
    CHECK_THROWS_AS(validate_period_matrix(bad), AsymmetricInput);

    MatrixXcd neg(1, 1);
    neg(0, 0) = cdouble(0, -1);
    CHECK_THROWS_AS(validate_period_matrix(neg), NotPositiveDefinite);

    // near-symmetric input is symmetrized
    MatrixXcd near(2, 2);
    near << cdouble(0.1, 1), cdouble(0.2, 0.3), cdouble(0.2 + 1e-11, 0.3), cdouble(0, 2);
    PeriodMatrix pm(near);
    CHECK((pm.tau() - pm.tau().transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncation radius pins and monotonicity") {
    PeriodMatrix pm(tau_i1());
    TruncationPolicy tight{1e-15, 60};
    CHECK(truncation_radius(pm, vec1(0.0), tight) == 4);
    TruncationPolicy loose{1e-6, 60};
    int r6 = truncation_radius(pm, vec1(0.0), loose);
    TruncationPolicy mid{1e-12, 60};
    int r12 = truncation_radius(pm, vec1(0.0), mid);
    CHECK(r6 <= r12);

    TruncationPolicy capped{1e-15, 2};
    CHECK_THROWS_AS(truncation_radius(pm, vec1(0.0), capped), RadiusCapExceeded);
}

TEST_CASE("tail bound dominates the extra-shell partial sum") {
    PeriodMatrix pm(tau_i1());
    for (int R : {3, 4, 5}) {
        double bound = truncation_tail_bound(pm, R);
        long double shell = 0.0L;
        for (int n = R + 1; n <= R + 10; ++n)
            shell += 2.0L * std::exp(-static_cast<long double>(kPi) * n * n);
        CHECK(bound >= static_cast<double>(shell));
    }
}

TEST_CASE("theta pinned values genus 1") {
    PeriodMatrix pm(tau_i1());
    cdouble v = theta_eval(pm, vec1(0.0));
    CHECK(std::abs(v - cdouble(1.086434811213308, 0.0)) < 1e-12);

    cdouble vz = theta_eval(pm, vec1(cdouble(0.5, 0.5)));
    CHECK(std::abs(vz) < 1e-12);

    HalfCharacteristic chi((VectorXd(1) << 0.0).finished(), (VectorXd(1) << 0.5).finished());
    cdouble vc = theta_char(pm, vec1(0.0), chi);
    CHECK(std::abs(vc - cdouble(0.9135791381561168, 0.0)) < 1e-9);

    cdouble v2 = theta_second_order(pm, vec1(0.0), VectorXd::Zero(1));
    CHECK(std::abs(v2 - cdouble(1.003734885487739, 0.0)) < 1e-9);

    // eps = delta = 0 characteristic reduces to plain theta
    HalfCharacteristic zero(VectorXd::Zero(1), VectorXd::Zero(1));
    cdouble z1 = theta_eval(pm, vec1(cdouble(0.2, 0.13)));
    cdouble z2 = theta_char(pm, vec1(cdouble(0.2, 0.13)), zero);
    CHECK(std::abs(z1 - z2) < 1e-13);
}

TEST_CASE("theta matches 1-d oracle on random tau, z") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 40; ++trial) {
        double re = rng.uniform(-0.5, 0.5);
        double im = rng.uniform(0.4, 2.0);
        MatrixXcd t(1, 1);
        t(0, 0) = cdouble(re, im);
        PeriodMatrix pm(t);
        VectorXcd z = random_cell_point(rng, t);
        cdouble mine = theta_eval(pm, z);
        auto ref = oracle_theta1(std::complex<long double>(re, im),
                                 std::complex<long double>(z(0).real(), z(0).imag()));
        CHECK(std::abs(mine - cdouble(static_cast<double>(ref.real()),
                                      static_cast<double>(ref.imag()))) < 1e-12);
    }
}

TEST_CASE("odd derivative at origin vanishes; parity") {
    SplitMix64 rng(7);
    for (int g : {1, 2, 3}) {
        MatrixXcd t = random_tau(rng, g);
        PeriodMatrix pm(t);
        VectorXcd d = random_direction(rng, g);
        DirectionalJet j{{d, 1}};
        CHECK(std::abs(theta_eval(pm, VectorXcd::Zero(g), j)) < 1e-9);

        VectorXcd z = random_cell_point(rng, t);
        cdouble a = theta_eval(pm, z);
        cdouble b = theta_eval(pm, -z);
        CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("odd characteristics have vanishing theta constants, g <= 3") {
    SplitMix64 rng(31);
    for (int g : {1, 2, 3}) {
        MatrixXcd t = random_tau(rng, g);
        PeriodMatrix pm(t);
        for (int ce = 0; ce < (1 << g); ++ce) {
            for (int cd = 0; cd < (1 << g); ++cd) {
                VectorXd e(g), d(g);
                for (int j = 0; j < g; ++j) {
                    e(j) = ((ce >> j) & 1) ? 0.5 : 0.0;
                    d(j) = ((cd >> j) & 1) ? 0.5 : 0.0;
                }
                HalfCharacteristic chi(e, d);
                if (!chi.odd()) continue;
                CHECK(std::abs(theta_char(pm, VectorXcd::Zero(g), chi)) < 1e-10);
            }
        }
    }
}

TEST_CASE("termwise derivative agrees with central finite difference") {
    SplitMix64 rng(11);
    for (int g : {1, 2}) {
        MatrixXcd t = random_tau(rng, g);
        PeriodMatrix pm(t);
        VectorXcd z = random_cell_point(rng, t);
        VectorXcd d = random_direction(rng, g);
        DirectionalJet j{{d, 1}};
        cdouble analytic = theta_eval(pm, z, j);
        double h = 1e-5;
        cdouble fd = (theta_eval(pm, z + h * d) - theta_eval(pm, z - h * d)) / (2.0 * h);
        CHECK(std::abs(analytic - fd) < 1e-6 * std::max(1.0, std::abs(analytic)));
    }
}

TEST_CASE("doubling the radius moves the value less than the reported bound") {
    SplitMix64 rng(13);
    for (int g : {1, 2}) {
        MatrixXcd t = random_tau(rng, g);
        PeriodMatrix pm(t);
        VectorXcd z = random_cell_point(rng, t);
        TruncationPolicy p1{1e-10, 80};
        FactoredTheta f1 = theta_factored(pm, z, {}, p1);
        // re-evaluate at twice the radius via a far tighter tolerance
        TruncationPolicy p2{1e-30, 120};
        FactoredTheta f2 = theta_factored(pm, z, {}, p2);
        CHECK(f2.radius >= f1.radius);
        CHECK(std::abs(f1.value() - f2.value()) <=
              f1.tail_bound * std::exp(-kPi * f1.exponent.imag()) + 1e-300);
    }
}

TEST_CASE("kummer vector basics") {
    PeriodMatrix pm(tau_i1());
    VectorXcd z = vec1(cdouble(0.21, 0.09));
    Eigen::VectorXcd k = kummer_vector(pm, z);
    CHECK(k.size() == 2);
    Eigen::VectorXcd kneg = kummer_vector(pm, -z);
    CHECK((k - kneg).norm() < 1e-12 * k.norm());

    // lattice shift gives a proportional vector: all 2x2 minors vanish
    SplitMix64 rng(5);
    MatrixXcd t2 = random_tau(rng, 2);
    PeriodMatrix pm2(t2);
    VectorXcd z2 = random_cell_point(rng, t2);
    VectorXcd lam = t2.col(0) + Eigen::VectorXcd::Ones(2);
    Eigen::VectorXcd a = kummer_vector(pm2, z2);
    Eigen::VectorXcd b = kummer_vector(pm2, z2 + lam);
    double worst = 0.0;
    for (int i = 0; i < a.size(); ++i)
        for (int j = i + 1; j < a.size(); ++j)
            worst = std::max(worst, std::abs(a(i) * b(j) - a(j) * b(i)));
    CHECK(worst < 1e-9 * a.norm() * b.norm());
}

TEST_CASE("theta divisor point") {
    PeriodMatrix pm(tau_i1());
    DivisorPoint dp = theta_divisor_point(pm, vec1(0.0), vec1(1.0));
    CHECK(dp.theta_abs < 1e-10 * dp.scale);
    // z0 == (1+i)/2 mod lattice
    cdouble z0 = dp.z0(0);
    double fr = std::abs(z0.real() - std::nearbyint(z0.real() - 0.5) - 0.5);
    CHECK(fr < 1e-8);
    CHECK(std::abs(z0.imag() - 0.5) < 1e-8);
    CHECK(dp.derivative_abs > 1e-3);

    SplitMix64 rng(77);
    MatrixXcd t2 = random_tau(rng, 2);
    PeriodMatrix pm2(t2);
    DivisorPoint dp2 = theta_divisor_point(pm2, random_cell_point(rng, t2),
                                           random_direction(rng, 2));
    CHECK(dp2.theta_abs < 1e-10 * dp2.scale);
}

TEST_CASE("quasi-periodicity in factored form") {
    SplitMix64 rng(101);
    for (int g : {1, 2, 3}) {
        MatrixXcd t = random_tau(rng, g);
        PeriodMatrix pm(t);
        for (int trial = 0; trial < 6; ++trial) {
            VectorXcd z = random_cell_point(rng, t);
            Eigen::VectorXd m1(g), m2(g);
            for (int i = 0; i < g; ++i) {
                m1(i) = std::floor(rng.uniform(-2.0, 3.0));
                m2(i) = std::floor(rng.uniform(-2.0, 3.0));
            }
            VectorXcd shift = m1.cast<cdouble>() + t * m2.cast<cdouble>();
            FactoredTheta lhs = theta_factored(pm, z + shift);
            FactoredTheta rhs = theta_factored(pm, z);
            cdouble factor_exp = -2.0 * (m2.cast<cdouble>().transpose() * z).value() -
                                 (m2.transpose() * t.real() * m2).value() -
                                 cdouble(0, 1) * (m2.transpose() * t.imag() * m2).value();
            // residual |theta(z+shift) - exp(i pi f) theta(z)| / max(|theta(z)|, 1)
            cdouble delta = lhs.exponent - factor_exp - rhs.exponent;
            cdouble ratio_phase = std::exp(cdouble(0, kPi) * delta);
            double mag_rhs = std::exp(-kPi * rhs.exponent.imag());
            double resid = std::abs(ratio_phase * lhs.sum - rhs.sum) * mag_rhs;
            double norm = std::max(mag_rhs * std::abs(rhs.sum), 1.0);
            CHECK(resid / norm < 1e-9);
        }
    }
}

TEST_CASE("simd kernel equivalence") {
#if defined(__x86_64__)
    if (!cpu_has_avx2_fma()) return;
    SplitMix64 rng(4242);
    std::vector<double> lm, ph, pr, pi;
    for (int i = 0; i < 2003; ++i) {
        lm.push_back(rng.uniform(-700.0, 2.0));
        ph.push_back(rng.uniform(-3000.0, 3000.0));
        pr.push_back(rng.uniform(-5.0, 5.0));
        pi.push_back(rng.uniform(-5.0, 5.0));
    }
    double r1, i1, r2, i2;
    theta_accumulate_scalar(lm.data(), ph.data(), pr.data(), pi.data(), lm.size(), r1, i1);
    theta_accumulate_avx2(lm.data(), ph.data(), pr.data(), pi.data(), lm.size(), r2, i2);
    double scale = std::max({std::abs(r1), std::abs(i1), 1.0});
    CHECK(std::abs(r1 - r2) < 1e-11 * scale);
    CHECK(std::abs(i1 - i2) < 1e-11 * scale);
#endif
}

TEST_CASE("two torsion distance") {
    PeriodMatrix pm(tau_i1());
    CHECK(two_torsion_distance(pm, vec1(cdouble(0.5, 0.5))) < 1e-12);
    CHECK(two_torsion_distance(pm, vec1(cdouble(0.31, 0.17))) > 0.05);
}
