#include <cmath>
#include "gtest/gtest.h"

#include "bpdn/certgen.hpp"
#include "bpdn/oracle.hpp"
#include "bpdn/solvers.hpp"

namespace bpdn {
namespace {

Instance identity_instance() {
  const SignPattern p(2, {0}, {});
  Certificate cert;
  cert.w = Eigen::Vector2d(1, 0);
  cert.y = Eigen::Vector2d(1, 0);
  return assemble_instance(MatrixXd::Identity(2, 2), p, Eigen::Vector2d(1, 0), 0.1, cert);
}

TEST(CertifyPocs, IdentityConvergesImmediately) {
  const SignPattern p(4, {1}, {3});
  VectorXd w0(4);
  w0 << 0.3, -2.0, 1.7, 0.0;
  PocsOptions opts;
  opts.w0 = w0;
  const Certificate c = certify_pocs(MatrixXd::Identity(4, 4), p, opts);
  // The first sweep clips w0 into Sign(x*); the second finds it fixed.
  EXPECT_EQ(c.iterations, 2);
  EXPECT_EQ(c.w, (VectorXd(4) << 0.3, 1, 1, -1).finished());
  EXPECT_LE((c.y - c.w).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CertifyPocs, PartialDct) {
  const MatrixXd A = build_matrix({EnsembleKind::PartialDCT, 64, 32, 1, 3});
  const SignPattern p = SignPattern::random(64, 4, 3);
  const Certificate c = certify_pocs(A, p);
  EXPECT_EQ(c.sign_residual, 0.0);
  EXPECT_LE(c.range_residual, 1e-10);
  EXPECT_NEAR(range_residual(A, c), c.range_residual, 1e-15);
  const Instance inst = assemble_instance(A, p, build_solution({4}, p), 0.1, c);
  EXPECT_LE(verify_optimality(inst), 1e-10);
}

TEST(CertifyPocs, GeometricallyInfeasible) {
  MatrixXd A(1, 2);
  A << 1, 1;
  const SignPattern p(2, {0}, {1});
  PocsOptions opts;
  opts.max_iter = 200;
  try {
    certify_pocs(A, p, opts);
    FAIL() << "expected CertificationError";
  } catch (const CertificationError& e) {
    EXPECT_EQ(e.kind(), CertificationError::Kind::Infeasible);
    EXPECT_EQ(e.method(), CertMethod::POCS);
    EXPECT_GT(e.final_gap(), 1.0);
    EXPECT_NE(std::string(e.what()).find("POCS"), std::string::npos);
  }
}

TEST(CertifyQuadProg, EmptyInactiveSet) {
  const SignPattern p(2, {0}, {1});
  MatrixXd A(2, 2);
  A << 1, 2, 3, 4;
  const Certificate c = certify_quadprog(A, p);
  EXPECT_EQ(c.iterations, 0);
  EXPECT_EQ(c.w, Eigen::Vector2d(1, -1));
}

TEST(CertifyQuadProg, AgreesWithPocs) {
  const MatrixXd A = build_matrix({EnsembleKind::PartialDCT, 64, 32, 1, 5});
  const SignPattern p = SignPattern::random(64, 4, 5);
  const Certificate a = certify_pocs(A, p);
  const Certificate b = certify_quadprog(A, p);
  EXPECT_EQ(b.method, CertMethod::QuadProg);
  for (Index i : p.active()) {
    EXPECT_EQ(a.w(i), b.w(i));
    EXPECT_EQ(std::abs(a.w(i)), 1.0);
  }
  const VectorXd x = build_solution({4}, p);
  EXPECT_LE(verify_optimality(assemble_instance(A, p, x, 0.1, a)), 1e-10);
  EXPECT_LE(verify_optimality(assemble_instance(A, p, x, 0.1, b)), 1e-10);
}

TEST(CertifyQuadProg, GeometricallyInfeasible) {
  MatrixXd A(1, 2);
  A << 1, 1;
  try {
    certify_quadprog(A, SignPattern(2, {0}, {1}));
    FAIL() << "expected CertificationError";
  } catch (const CertificationError& e) {
    EXPECT_EQ(e.kind(), CertificationError::Kind::NoSolutionForPattern);
  }
  MatrixXd B(1, 3);
  B << 1, 1, 0;
  EXPECT_THROW(certify_quadprog(B, SignPattern(3, {0}, {1})), CertificationError);
}

TEST(CertifyInjective, Identity) {
  const Certificate c =
      certify_injective(MatrixXd::Identity(3, 3), SignPattern(3, {0}, {}), Eigen::Vector2d(0.5, -0.5));
  EXPECT_EQ(c.w, Eigen::Vector3d(1, 0.5, -0.5));
  EXPECT_LE((c.y - c.w).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(CertifyInjective, BandedMatrix) {
  const MatrixXd A = build_matrix({EnsembleKind::BandedCoherent, 300, 300, 5, 0});
  const SignPattern p = SignPattern::random(300, 30, 1);
  const Certificate c = certify_injective(A, p, VectorXd::Zero(270));
  EXPECT_LE(c.range_residual, 1e-8);
}

TEST(CertifyInjective, WideMatrixIsNotInjective) {
  MatrixXd A(2, 3);
  A << 1, 0, 0, 0, 1, 0;
  try {
    certify_injective(A, SignPattern(3, {0}, {}), Eigen::Vector2d(0, 0));
    FAIL() << "expected CertificationError";
  } catch (const CertificationError& e) {
    EXPECT_EQ(e.kind(), CertificationError::Kind::NotInjective);
  }
}

TEST(Certify, AutoPicksInjectiveForSquareFullRank) {
  const MatrixXd A = build_matrix({EnsembleKind::BandedCoherent, 40, 40, 3, 0});
  EXPECT_EQ(certify(A, SignPattern::random(40, 4, 2)).method, CertMethod::InjectiveDirect);
  const MatrixXd B = build_matrix({EnsembleKind::Bernoulli, 40, 20, 1, 2});
  EXPECT_EQ(certify(B, SignPattern::random(40, 2, 2)).method, CertMethod::POCS);
  EXPECT_EQ(certify(B, SignPattern::random(40, 2, 2), CertStrategy::QuadProg).method,
            CertMethod::QuadProg);
}

TEST(AssembleInstance, IdentityExamples) {
  const Instance a = identity_instance();
  EXPECT_EQ(a.b, Eigen::Vector2d(1.1, 0));
  EXPECT_EQ(soft_threshold(a.b, 0.1), a.x_star);
  EXPECT_LE(verify_optimality(a), 1e-15);

  Certificate cert;
  cert.w = Eigen::Vector2d(0, -1);
  cert.y = Eigen::Vector2d(0, -1);
  const Instance b = assemble_instance(MatrixXd::Identity(2, 2), SignPattern(2, {}, {1}),
                                       Eigen::Vector2d(0, -2), 0.5, cert);
  EXPECT_EQ(b.b, Eigen::Vector2d(0, -2.5));
  EXPECT_EQ(soft_threshold(b.b, 0.5), b.x_star);
}

TEST(AssembleInstance, RejectsPatternMismatch) {
  Certificate cert;
  cert.w = Eigen::Vector2d(1, 0);
  cert.y = Eigen::Vector2d(1, 0);
  EXPECT_THROW(assemble_instance(MatrixXd::Identity(2, 2), SignPattern(2, {0}, {}),
                                 Eigen::Vector2d(-1, 0), 0.1, cert),
               PatternMismatch);
  EXPECT_THROW(assemble_instance(MatrixXd::Identity(2, 2), SignPattern(2, {0}, {}),
                                 Eigen::Vector2d(1, 0), 0.0, cert),
               std::invalid_argument);
}

TEST(AssembleInstance, BernoulliAgreesWithOracle) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = generate_instance({EnsembleKind::Bernoulli, 10, 6, 1, seed},
                                            {2, MagnitudeLaw::GaussianMagnitude, 1.0, seed}, 0.1);
    const OracleResult r = brute_force_solve(inst.A, inst.b, inst.lambda);
    if ((r.x_hat - inst.x_star).lpNorm<Eigen::Infinity>() <= 1e-8) continue;
    // Repeated or opposite columns make the minimizer non-unique.
    EXPECT_LE(optimality_residual(inst.A, inst.b, inst.lambda, r.x_hat), 1e-10) << "seed " << seed;
    EXPECT_LE(inst.optimality_residual, 1e-10) << "seed " << seed;
    EXPECT_NEAR(r.objective, objective(inst, inst.x_star), 1e-10) << "seed " << seed;
  }
}

TEST(VerifyOptimality, DetectsPerturbation) {
  Instance inst = generate_instance({EnsembleKind::PartialDCT, 128, 48, 1, 4},
                                    {6, MagnitudeLaw::GaussianMagnitude, 1.0, 4}, 0.1);
  EXPECT_LE(inst.optimality_residual, 1e-10 * (1 + (inst.A.transpose() * inst.b).lpNorm<Eigen::Infinity>()));
  inst.b(0) += 1.0;
  EXPECT_GT(verify_optimality(inst), inst.lambda / 2);
}

TEST(EquivalentParameters, Examples) {
  const EquivalentParameters eq = equivalent_parameters(identity_instance());
  EXPECT_NEAR(eq.sigma, 0.1, 1e-15);
  EXPECT_EQ(eq.tau, 1.0);

  const Instance inst = generate_instance({EnsembleKind::Bernoulli, 60, 30, 1, 8},
                                          {3, MagnitudeLaw::GaussianMagnitude, 1.0, 8}, 0.25);
  EXPECT_NEAR(equivalent_parameters(inst).sigma, inst.lambda * inst.certificate.y.norm(), 1e-12);
  EXPECT_NEAR(equivalent_parameters(inst).tau, inst.x_star.lpNorm<1>(), 1e-15);
}

TEST(EquivalentParameters, DctGolden) {
  const Instance inst = generate_instance({EnsembleKind::PartialDCT, 1000, 200, 1, 42},
                                          {20, MagnitudeLaw::GaussianMagnitude, 1.0, 42}, 0.1);
  const EquivalentParameters eq = equivalent_parameters(inst);
  EXPECT_NEAR(eq.sigma, 1.0402228762607109, 1e-9);
  EXPECT_NEAR(eq.tau, 15.95163650671857, 1e-12);
}

// Construction identity, checked across ensembles and seeds.
TEST(Construction, GradientEqualsLambdaW) {
  const EnsembleSpec specs[] = {{EnsembleKind::PartialDCT, 96, 40, 1, 0},
                                {EnsembleKind::Bernoulli, 96, 40, 1, 0},
                                {EnsembleKind::ThreeBasesUnion, 96, 32, 1, 0},
                                {EnsembleKind::BandedCoherent, 60, 60, 7, 0}};
  for (EnsembleSpec e : specs)
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      e.seed = seed;
      const double lambda = 0.05 * static_cast<double>(seed);
      const Instance inst =
          generate_instance(e, {4, MagnitudeLaw::GaussianMagnitude, 1.0, seed}, lambda);
      const VectorXd g = -(inst.A.transpose() * (inst.A * inst.x_star - inst.b));
      EXPECT_LE((g - lambda * inst.certificate.w).lpNorm<Eigen::Infinity>(), 1e-10);
      EXPECT_LE(inst.certificate.w.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
      for (Index i : SignPattern::from_vector(inst.x_star).active())
        EXPECT_EQ(inst.certificate.w(i), inst.x_star(i) > 0 ? 1.0 : -1.0);
      EXPECT_LE(inst.optimality_residual, 1e-8);
      // Local optimality probe along every coordinate.
      const double f0 = objective(inst, inst.x_star);
      for (Index i = 0; i < inst.n(); ++i)
        for (double d : {-1e-3, 1e-3}) {
          VectorXd x = inst.x_star;
          x(i) += d;
          EXPECT_LE(f0, objective(inst, x) + 1e-12);
        }
    }
}

}  // namespace
}  // namespace bpdn
