#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"

using namespace cmvlab;
using testsupport::q;
using testsupport::qi;

using S = ExactComplex;
using BM = BandMatrix<S>;
using P = LaurentPoly<S>;

TEST_CASE("eigenvalue diagonal of the Euler operator") {
  const BM leb = lebesgue_solution<S>(5);
  const long expected[] = {0, -1, 1, -2, 2};
  for (int k = 0; k < 5; ++k) CHECK(leb.at(k, k) == q(expected[k]));

  // closed form lambda_k = l0 + (l0 - l1)((-1)^k (1+2k) - 1)/4
  for (int k = 0; k < 24; ++k) {
    const long sign = k % 2 == 0 ? 1 : -1;
    CHECK(q(lebesgue_lambda(k)) == q(sign * (1 + 2 * k) - 1, 4));
  }

  // eigenvalues of z d/dz on the monomial basis
  auto euler = DiffOperator<S>::euler();
  auto olp = compute_olp(VerblunskySeq<S>::zero(), 10);
  for (int nn = 0; nn <= 10; ++nn)
    CHECK(op_apply(euler, olp.x[nn]) == q(lebesgue_lambda(nn)) * olp.x[nn]);
}

TEST_CASE("pattern parameter counts") {
  CHECK(pattern_parameters(SolvePattern::diagonal(10)).size() == 10);
  CHECK(pattern_parameters(SolvePattern::tridiagonal(10)).size() == 10 + 18);
  CHECK(pattern_parameters(SolvePattern::almost_diagonal(3, 10)).size() == 9 + 7);
  // head 3x3 (9 real) + tail diag (7) + off-diagonal pairs for k = 2..8
  CHECK(pattern_parameters(SolvePattern::almost_tridiagonal(3, 10)).size() ==
        9 + 7 + 14);
  CHECK_THROWS_AS(pattern_parameters(SolvePattern::almost_diagonal(10, 10)),
                  ConfigInvalid);
}

TEST_CASE("diagonal solve dimensions at and off the Lebesgue point") {
  auto zero = VerblunskySeq<S>::zero();
  auto a35 = testsupport::alpha_constant_3_5<S>();

  // order n admits exactly the polynomials of degree < n in the eigenvalue
  // diagonal: dimension n, containing the identity and the diagonal itself
  for (int n = 2; n <= 4; ++n) {
    auto basis = nullspace(assemble_system(zero, n, SolvePattern::diagonal(24), 64));
    CHECK(basis.dimension == n);
    CHECK(basis.contains_identity);
    CHECK(basis.contains_lebesgue);
    CHECK(basis.classification == SolutionClass::LebesgueType);
  }
  for (int n = 2; n <= 3; ++n) {
    auto basis = nullspace(assemble_system(a35, n, SolvePattern::diagonal(24), 64));
    CHECK(basis.dimension == 1);
    CHECK(basis.classification == SolutionClass::Trivial);
  }
}

namespace {

bool zero_within(const BM& m, int bound) {
  bool ok = true;
  m.for_each_trusted([&](int i, int j, const S& v) {
    if (std::max(i, j) < bound && !ScalarTraits<S>::is_zero(v)) ok = false;
  });
  return ok;
}

}  // namespace

TEST_CASE("n=2 basis is exactly the identity and the eigenvalue diagonal") {
  auto sys = assemble_system(VerblunskySeq<S>::zero(), 2,
                             SolvePattern::diagonal(24), 64);
  auto basis = nullspace(sys);
  REQUIRE(basis.dimension == 2);
  // truncated solutions solve every equation that is complete for length 24
  CmvPair<S> pair(VerblunskySeq<S>::zero(), 64);
  for (const auto& b : basis.basis)
    CHECK(zero_within(hermitian_ad(pair, b.embed_zero_tail(64), 2), 22));
  CHECK(basis.contains_identity);
  CHECK(basis.contains_lebesgue);
}

TEST_CASE("almost patterns stay trivial off the Lebesgue point") {
  auto a35 = testsupport::alpha_constant_3_5<S>();
  auto basis = nullspace(
      assemble_system(a35, 2, SolvePattern::almost_diagonal(3, 20), 64));
  CHECK(basis.dimension == 1);
  CHECK(basis.classification == SolutionClass::Trivial);

  auto tri = nullspace(
      assemble_system(a35, 2, SolvePattern::tridiagonal(20), 64));
  CHECK(tri.dimension == 1);
  CHECK(tri.classification == SolutionClass::Trivial);
}

TEST_CASE("solver soundness under window doubling") {
  Rng rng(51);
  for (int trial = 0; trial < 2; ++trial) {
    auto alpha = VerblunskySeq<S>::list(random_pythagorean_list(rng, 6));
    auto basis =
        nullspace(assemble_system(alpha, 2, SolvePattern::diagonal(16), 48));
    CmvPair<S> big(alpha, 96);
    for (const auto& b : basis.basis) {
      BM image = hermitian_ad(big, b.embed_zero_tail(96), 2);
      bool ok = true;
      image.for_each_trusted([&](int i, int j, const S& v) {
        if (std::max(i, j) < 16 - 2 && !ScalarTraits<S>::is_zero(v)) ok = false;
      });
      CHECK(ok);
    }
    CHECK(basis.dimension == 1);  // coefficients not all null
  }
}

TEST_CASE("assembled systems are linear in the unknown") {
  auto sys = assemble_system(testsupport::alpha_constant_3_5<S>(), 2,
                             SolvePattern::diagonal(12), 48);
  // superposition is checked inside assemble_system; spot-check shapes here
  CHECK(sys.params.size() == 12);
  CHECK(sys.extended_params.size() == 18);
  CHECK(!sys.rows.empty());
  for (const auto& row : sys.rows) CHECK(row.size() == 18);
}

TEST_CASE("window too small raises") {
  CHECK_THROWS_AS(
      assemble_system(VerblunskySeq<S>::zero(), 2, SolvePattern::diagonal(24), 16),
      WindowTooSmall);
}

TEST_CASE("float backend dimensions cross-check the exact ones") {
  using F = FloatComplex;
  auto zero = VerblunskySeq<F>::zero();
  auto basis = nullspace(assemble_system(zero, 2, SolvePattern::diagonal(24), 64));
  CHECK(basis.dimension == 2);
  CHECK(basis.classification == SolutionClass::LebesgueType);

  auto a06 = VerblunskySeq<F>::constant(F(0.6, 0.0));
  auto t = nullspace(assemble_system(a06, 2, SolvePattern::diagonal(24), 64));
  CHECK(t.dimension == 1);
  CHECK(t.classification == SolutionClass::Trivial);

  auto geo = VerblunskySeq<F>::geometric(0.5, 0.7);
  auto g = nullspace(assemble_system(geo, 2, SolvePattern::diagonal(20), 64));
  CHECK(g.dimension == 1);
}

TEST_CASE("reconstruction of the Euler operator") {
  auto zero = VerblunskySeq<S>::zero();
  const int w = 48;
  auto d = reconstruct_operator(zero, lebesgue_solution<S>(w), 1, w);
  CHECK(d.order() == 1);
  CHECK(d.coeff(1) == P::monomial(1, q(1)));
  CHECK(d.coeff(0).is_zero());
}

TEST_CASE("reconstruction round trip through the operator matrix") {
  auto zero = VerblunskySeq<S>::zero();
  const int w = 48;
  // forward: apply z d/dz to the basis and read off the matrix
  const BM omega =
      testsupport::operator_matrix_zero_alpha(DiffOperator<S>::euler(), w);
  CHECK(omega.eq(lebesgue_solution<S>(w)));
  // backward: recover the operator, then its matrix again
  auto d = reconstruct_operator(zero, omega, 1, w);
  CHECK(d.eq(DiffOperator<S>::euler()));
  CHECK(testsupport::operator_matrix_zero_alpha(d, w).eq(omega));
}

TEST_CASE("multiplication operators reconstruct at order zero") {
  Rng rng(53);
  auto alpha = VerblunskySeq<S>::list(random_pythagorean_list(rng, 6));
  const int w = 48;
  CmvPair<S> pair(alpha, w);
  const BM omega = pair.cpow(1) + pair.cpow(-1);
  auto d = reconstruct_operator(alpha, omega, 0, w);
  CHECK(d.order() == 0);
  CHECK(d.coeff(0) == P{{1, q(1)}, {-1, q(1)}});
  // the same operand also passes with a higher bound, still at order 0
  auto d2 = reconstruct_operator(alpha, omega, 2, w);
  CHECK(d2.order() == 0);
}

TEST_CASE("reconstruction refuses when the ad-condition fails") {
  auto a35 = testsupport::alpha_constant_3_5<S>();
  CHECK_THROWS_AS(
      reconstruct_operator(a35, lebesgue_solution<S>(64), 3, 64),
      NoSolution);
}

TEST_CASE("kernel certification across points and orders") {
  Rng rng(55);
  for (const S& z : {q(2), qi(1, 1, 1, 1)}) {
    for (int n = 1; n <= 3; ++n) {
      auto alpha = VerblunskySeq<S>::list(random_pythagorean_list(rng, 6));
      std::vector<S> tail;
      for (int k = 0; k < 64; ++k) tail.push_back(q(lebesgue_lambda(k)));
      auto rep = verify_kernel_basis(alpha, z, n, 64, tail);
      INFO("n=", n);
      CHECK(rep.cascade_ok);
      CHECK(rep.band_ok);
      CHECK(rep.gamma_ok);
      CHECK(rep.gamma_nonzero);
      CHECK(rep.delta_ok);
    }
  }
}

TEST_CASE("gamma values at the Lebesgue point are powers of the argument") {
  std::vector<S> tail(48, q(1));
  auto rep = verify_kernel_basis(VerblunskySeq<S>::zero(), q(2), 2, 48, tail);
  REQUIRE(rep.gamma_ok);
  for (int k = 0; k < int(rep.gamma.size()); ++k)
    CHECK(rep.gamma[k] == (k % 2 == 0 ? q(1) : q(4)));
}

TEST_CASE("delta values reduce to shifted tail entries at the Lebesgue point") {
  std::vector<S> tail;
  for (int k = 0; k < 48; ++k) tail.push_back(q(lebesgue_lambda(k)));
  auto rep = verify_kernel_basis(VerblunskySeq<S>::zero(), q(2), 2, 48, tail);
  REQUIRE(rep.delta_ok);
  for (int k = 0; k < int(rep.delta.size()); ++k)
    CHECK(rep.delta[k] == q(lebesgue_lambda(k + 2)));
}

TEST_CASE("kernel certification rejects the origin") {
  std::vector<S> tail(16, q(1));
  CHECK_THROWS_AS(
      verify_kernel_basis(VerblunskySeq<S>::zero(), q(0), 2, 32, tail),
      ZeroArgument);
}

TEST_CASE("cascade structure of solutions") {
  // Lebesgue instance of the order-2 condition: one staged first-order image
  // lands on the identity (almost diagonal), the next one vanishes.
  auto zero = VerblunskySeq<S>::zero();
  const int w = 48;
  CmvPair<S> pair(zero, w);
  const BM leb = lebesgue_solution<S>(w);
  REQUIRE(bm_is_zero(hermitian_ad(pair, leb, 2)));
  BM stage1 = hermitian_ad(pair, leb, 1);
  CHECK(stage1.eq(BM::identity(w)));
  CHECK(bm_is_zero(hermitian_ad(pair.select(1), stage1, 1)));

  // Off the Lebesgue point the order-3 almost-tridiagonal solution is the
  // truncated identity; its staged images vanish on the complete region.
  auto a35 = testsupport::alpha_constant_3_5<S>();
  const int n = 3, m = 24;
  CmvPair<S> p35(a35, 72);
  auto basis =
      nullspace(assemble_system(a35, n, SolvePattern::almost_tridiagonal(3, m), 72));
  REQUIRE(basis.dimension == 1);
  BM omega = basis.basis[0].embed_zero_tail(72);
  for (int k = 0; k < n - 1; ++k) {
    CHECK(zero_within(hermitian_ad(p35.select(k), omega, n - k), m - n));
    BM next = hermitian_ad(p35.select(k), omega, 1);
    bool offdiag_zero = true;
    next.for_each_trusted([&](int i, int j, const S& v) {
      if (i != j && std::max(i, j) < m - n)
        offdiag_zero = offdiag_zero && ScalarTraits<S>::is_zero(v);
    });
    CHECK(offdiag_zero);
    omega = next;
  }
}
