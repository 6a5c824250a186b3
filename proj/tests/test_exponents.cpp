#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mnlab/exponents.hpp"
#include "support.hpp"

using namespace mnlab;
using testing::Q;

namespace {

RecipExponent R(const char* recip) { return RecipExponent(Q(recip)); }

SteinWeissIndices sw(int n, const char* p, const char* q, const char* a, const char* b,
                     const char* g) {
  return {n, R(p), R(q), Q(a), Q(b), Q(g)};
}

MixedIndices mixed(int n, const char* p, const char* q, const char* pt, const char* qt,
                   const char* a, const char* b, const char* g) {
  return {n, R(p), R(q), R(pt), R(qt), Q(a), Q(b), Q(g)};
}

const Condition& cond(const Verdict& v, const char* id) {
  const Condition* c = v.find(id);
  REQUIRE_MESSAGE(c != nullptr, id);
  return *c;
}

}  // namespace

TEST_CASE("reciprocal exponents") {
  CHECK(RecipExponent::from_exponent(Q("4/3")).value() == Q("3/4"));
  CHECK(RecipExponent::infinity().is_infinite());
  CHECK(std::isinf(RecipExponent::infinity().exponent()));
  CHECK(R("1/4").exponent() == doctest::Approx(4.0));
  CHECK_THROWS_AS(RecipExponent(Q("5/4")), std::domain_error);
  CHECK_THROWS_AS(RecipExponent(Q("-1/4")), std::domain_error);
  CHECK_THROWS_AS(RecipExponent::from_exponent(Q("1/2")), std::domain_error);

  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    const RecipExponent p(testing::random_unit(rng, 30));
    CHECK(p.dual().dual() == p);
    CHECK(p.value() + p.dual().value() == 1);
  }
}

TEST_CASE("rational text is exact") {
  CHECK(Q("6/8") == Rational(3, 4));
  CHECK(Q("-2") == Rational(-2));
  CHECK(to_string(Q("6/8")) == "3/4");
  CHECK_THROWS_AS(Q("0.75"), std::invalid_argument);
  CHECK_THROWS_AS(Q("1e3"), std::invalid_argument);
  CHECK_THROWS_AS(Q("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Q(" 1"), std::invalid_argument);
}

TEST_CASE("stein-weiss") {
  const Verdict hls = check_stein_weiss(sw(2, "3/4", "1/4", "0", "0", "1"));
  CHECK(hls.admissible);
  CHECK(cond(hls, "scaling").margin == 0);

  const Verdict on_beta = check_stein_weiss(sw(2, "3/4", "1/4", "0", "1/2", "1/2"));
  CHECK_FALSE(on_beta.admissible);
  CHECK_FALSE(cond(on_beta, "beta_lt").satisfied);
  CHECK(cond(on_beta, "beta_lt").margin == 0);

  const Verdict negative = check_stein_weiss(sw(2, "3/4", "1/4", "-1/10", "0", "11/10"));
  CHECK_FALSE(negative.admissible);
  CHECK(negative.first_failed() == "nonneg");
  CHECK(cond(negative, "nonneg").margin == Q("-1/10"));

  std::vector<std::string> ids;
  for (const auto& c : hls.conditions) ids.push_back(c.id);
  CHECK(ids == std::vector<std::string>{"range_pq", "beta_lt", "alpha_lt", "gamma_range",
                                        "scaling", "nonneg"});
}

TEST_CASE("radial stein-weiss") {
  CHECK(check_radial_stein_weiss(sw(2, "3/4", "1/4", "-1/10", "0", "11/10")).admissible);
  const Verdict low = check_radial_stein_weiss(sw(2, "3/4", "1/4", "-3/5", "0", "8/5"));
  CHECK_FALSE(low.admissible);
  CHECK(low.first_failed() == "radial_lower");
  CHECK(cond(low, "radial_lower").margin == Q("-1/10"));
}

TEST_CASE("mixed stein-weiss") {
  const Verdict equal = check_mixed_stein_weiss(
      mixed(2, "3/4", "1/4", "1/3", "1/3", "0", "0", "1"), MixedMode::general);
  CHECK(equal.admissible);
  CHECK(cond(equal, "third_mixed").margin == Q("1/2"));

  const Verdict spread = check_mixed_stein_weiss(
      mixed(2, "3/4", "1/4", "1", "0", "0", "0", "1"), MixedMode::general);
  CHECK_FALSE(spread.admissible);
  CHECK(spread.first_failed() == "third_mixed");
  CHECK(cond(spread, "third_mixed").margin == Q("-1/2"));

  const Verdict order = check_mixed_stein_weiss(
      mixed(2, "3/4", "1/4", "1/2", "1", "0", "0", "1"), MixedMode::general);
  CHECK_FALSE(order.admissible);
  CHECK_FALSE(cond(order, "angular_order").satisfied);

  // Margin 0 on the third condition: allowed in general mode, not in strict.
  const auto edge = mixed(2, "3/4", "1/4", "1", "1/2", "0", "0", "1");
  CHECK(mixed_third_margin(edge) == 0);
  CHECK(check_mixed_stein_weiss(edge, MixedMode::general).admissible);
  CHECK_FALSE(check_mixed_stein_weiss(edge, MixedMode::strict).admissible);

  // The extended modes accept p = 1 and q = inf.
  const auto endpoint = mixed(2, "1", "0", "1/2", "1/2", "1", "0", "1");
  CHECK_FALSE(check_mixed_stein_weiss(endpoint, MixedMode::general).admissible);
  CHECK(cond(check_mixed_stein_weiss(endpoint, MixedMode::bandlimited), "range_pq").satisfied);
}

TEST_CASE("nonhomogeneous") {
  const auto idx = mixed(2, "1/2", "1/2", "1/2", "1/2", "0", "0", "0");
  CHECK(check_nonhomogeneous(idx, Q("21/10")).admissible);
  const Verdict edge = check_nonhomogeneous(idx, Q("2"));
  CHECK_FALSE(edge.admissible);
  CHECK(edge.first_failed() == "mu_decay");

  // p = 1, q = inf leaves no room: alpha < 0 and beta < 0 contradict alpha + beta >= 0.
  const Verdict extreme = check_nonhomogeneous(mixed(2, "1", "0", "1", "0", "0", "0", "0"), Q("4"));
  CHECK(cond(extreme, "third_mixed").margin == 0);
  CHECK(cond(extreme, "mu_decay").satisfied);
  CHECK_FALSE(cond(extreme, "alpha_lt").satisfied);
  CHECK_FALSE(cond(extreme, "beta_lt").satisfied);
}

TEST_CASE("weighted sobolev") {
  const auto pointwise = mixed(3, "1/2", "0", "0", "0", "0", "-1/2", "0");
  const Verdict v = check_weighted_sobolev(pointwise, Q("1"));
  CHECK(v.admissible);
  CHECK(v.flags.at("pointwise_form"));
  CHECK(v.flags.at("pointwise_range"));

  const Verdict l2 = check_weighted_sobolev(mixed(3, "1/2", "0", "1/2", "0", "0", "-1/2", "0"),
                                            Q("1"));
  CHECK_FALSE(l2.admissible);
  CHECK_FALSE(l2.flags.at("pointwise_range"));

  const Verdict off = check_weighted_sobolev(mixed(3, "1/2", "0", "0", "0", "0", "-2/5", "0"),
                                             Q("1"));
  CHECK_FALSE(cond(off, "scaling").satisfied);
  CHECK_THROWS_AS(check_weighted_sobolev(pointwise, Q("3")), std::domain_error);
  CHECK_THROWS_AS(check_weighted_sobolev(pointwise, Q("0")), std::domain_error);
}

TEST_CASE("ckn deltas") {
  CknIndices idx;
  idx.n = 3;
  idx.p = idx.ptilde = R("1/2");
  idx.r = idx.rtilde = R("1/2");
  CHECK(ckn_deltas(idx).first == 1);
  idx.r = idx.rtilde = R("1/6");
  CHECK(ckn_deltas(idx).first == 0);
  CHECK(ckn_deltas(idx).second == 0);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    CknIndices c;
    c.n = std::uniform_int_distribution<int>(2, 5)(rng);
    c.a = 1;
    c.sigma = testing::random_rational(rng, 6, 0, c.n - 1) + Rational(1, 7);
    c.p = c.r = RecipExponent(testing::random_unit(rng));
    CHECK(ckn_deltas(c).first == c.sigma);
  }
}

namespace {

CknIndices hardy() {
  CknIndices idx;
  idx.n = 3;
  idx.a = 1;
  idx.sigma = 1;
  idx.p = idx.ptilde = idx.q = idx.qtilde = idx.r = idx.rtilde = R("1/2");
  idx.alpha = 0;
  idx.gamma = 1;
  idx.beta = 1;
  return idx;
}

CknIndices sobolev() {
  CknIndices idx = hardy();
  idx.r = idx.rtilde = R("1/6");
  idx.gamma = 0;
  idx.beta = 0;
  return idx;
}

}  // namespace

TEST_CASE("fractional ckn") {
  const Verdict h = check_ckn(hardy(), false);
  CHECK(h.admissible);
  CHECK(cond(h, "delta_balance").margin == 3);

  CknIndices on_gamma = hardy();
  on_gamma.gamma = Q("3/2");
  CHECK_FALSE(cond(check_ckn(on_gamma, false), "gamma_lt").satisfied);

  const Verdict s = check_ckn(sobolev(), false);
  CHECK(s.admissible);
  CHECK(cond(s, "delta_balance").margin == 0);
  CHECK_FALSE(s.flags.at("strict_balance"));

  CknIndices mixed_angular = sobolev();
  mixed_angular.rtilde = R("1/2");
  CHECK(check_ckn(mixed_angular, false).admissible);

  CknIndices frac = hardy();
  frac.sigma = Q("1/2");
  CHECK_THROWS_AS(check_ckn(frac, true), std::domain_error);
  frac.sigma = 3;
  CHECK_THROWS_AS(check_ckn(frac, false), std::domain_error);
}

TEST_CASE("integer sigma drops the lower bound on alpha") {
  // alpha = n/p - n exactly: fails the strict lower bound, vacuous for integer sigma.
  CknIndices idx = hardy();
  idx.alpha = Q("-3/2");
  idx.gamma = Q("-1/2");
  idx.beta = Q("-1/2");
  const Verdict frac = check_ckn(idx, false);
  const Verdict integer = check_ckn(idx, true);
  CHECK_FALSE(cond(frac, "alpha_lower").satisfied);
  CHECK(cond(integer, "alpha_lower").vacuous);
  CHECK(cond(integer, "alpha_lower").satisfied);
}

TEST_CASE("classical ckn") {
  CHECK(check_ckn_classical(sobolev()).admissible);

  // a = 1/2, q = 2: Delta = 0 at r = 3; r = 10/3 gives Delta = -1/10, scaling kept by gamma.
  CknIndices idx = sobolev();
  idx.a = Q("1/2");
  idx.q = idx.qtilde = R("1/2");
  idx.r = idx.rtilde = R("3/10");
  idx.gamma = Q("-1/10");
  const Verdict v = check_ckn_classical(idx);
  CHECK(cond(v, "scaling").satisfied);
  CHECK_FALSE(cond(v, "delta_nonneg").satisfied);
  CHECK(cond(v, "delta_nonneg").margin == Q("-1/10"));

  CknIndices ident = hardy();
  ident.gamma = ident.alpha + 1;
  const Verdict on_a = check_ckn_classical(ident);
  CHECK(on_a.admissible);
  CHECK(cond(on_a, "delta_le_a").margin == 0);
  CHECK_FALSE(cond(on_a, "delta_le_a").vacuous);

  CknIndices mismatch = hardy();
  mismatch.ptilde = R("1/3");
  CHECK_THROWS_AS(check_ckn_classical(mismatch), std::domain_error);
}

TEST_CASE("radial ckn") {
  CHECK(check_ckn_radial(hardy()).admissible);

  // p = 1, a = 1/2, q = 2, r = 4: Delta = a(1 - n) = -1, strict at p = 1.
  CknIndices idx = hardy();
  idx.a = Q("1/2");
  idx.p = idx.ptilde = R("1");
  idx.r = idx.rtilde = R("1/4");
  idx.alpha = 0;
  idx.beta = 0;
  idx.gamma = -1;
  const Verdict v = check_ckn_radial(idx);
  CHECK(cond(v, "scaling").satisfied);
  CHECK(cond(v, "delta_band").margin == 0);
  CHECK_FALSE(v.admissible);
}

TEST_CASE("strichartz") {
  StrichartzIndices s;
  s.n = 4;
  s.p = R("1/2");
  s.r = R("1/6");
  CHECK(check_strichartz(s, StrichartzVariant::classical).admissible);

  s.n = 3;
  for (const char* r : {"1/2", "1/6", "1/100", "1/1000000"}) {
    s.r = R(r);
    CHECK_FALSE(check_strichartz(s, StrichartzVariant::classical).admissible);
  }

  StrichartzIndices pre;
  pre.n = 3;
  pre.q = R("1/6");
  pre.qtilde = R("1/2");
  pre.delta = 0;
  pre.epsilon = Q("1/6");
  const Verdict v = check_strichartz(pre, StrichartzVariant::precised);
  CHECK(v.admissible);
  CHECK(cond(v, "epsilon_bound").margin == 0);
  pre.epsilon = Q("1/5");
  CHECK_FALSE(check_strichartz(pre, StrichartzVariant::precised).admissible);
}

namespace {

// Independent restatement of the mixed third condition.
Rational third_reference(int n, const Rational& p, const Rational& q, const Rational& pt,
                         const Rational& qt, const Rational& a, const Rational& b) {
  return a + b - Rational(n - 1) * q + Rational(n - 1) * p - Rational(n - 1) * pt +
         Rational(n - 1) * qt;
}

}  // namespace

TEST_CASE("reductions over random tuples") {
  std::mt19937_64 rng(20240611);
  int admissible_seen = 0;
  for (int i = 0; i < 10000; ++i) {
    const int n = std::uniform_int_distribution<int>(2, 5)(rng);
    const Rational p = testing::random_unit(rng);
    const Rational q = testing::random_unit(rng);
    const Rational a = testing::random_rational(rng, 6, -2, 2);
    const Rational b = testing::random_rational(rng, 6, -2, 2);
    // Half the tuples sit on the scaling line.
    const Rational g = (i % 2 == 0) ? Rational(n) + n * q - n * p - a - b
                                    : testing::random_rational(rng, 6, 0, n);

    const SteinWeissIndices s{n, RecipExponent(p), RecipExponent(q), a, b, g};
    const MixedIndices same{n, s.p, s.q, s.p, s.q, a, b, g};
    const Verdict sv = check_stein_weiss(s);
    REQUIRE(check_mixed_stein_weiss(same, MixedMode::general).admissible == sv.admissible);
    admissible_seen += sv.admissible;

    const RecipExponent t(testing::random_unit(rng));
    const MixedIndices equal{n, s.p, s.q, t, t, a, b, g};
    const Verdict mv = check_mixed_stein_weiss(equal, MixedMode::general);
    const Verdict rv = check_radial_stein_weiss(s);
    REQUIRE(mv.find("third_mixed")->margin == rv.find("radial_lower")->margin);
    REQUIRE(mv.find("third_mixed")->satisfied == rv.find("radial_lower")->satisfied);

    const RecipExponent pt(testing::random_unit(rng)), qt(testing::random_unit(rng));
    REQUIRE(mixed_third_margin({n, s.p, s.q, pt, qt, a, b, g}) ==
            third_reference(n, p, q, pt.value(), qt.value(), a, b));

    if (sv.admissible) REQUIRE(rv.admissible);
  }
  CHECK(admissible_seen > 100);
}

TEST_CASE("fractional ckn contains classical ckn on diagonal tuples") {
  std::mt19937_64 rng(99);
  int hits = 0;
  for (int i = 0; i < 20000 && hits < 300; ++i) {
    CknIndices idx;
    idx.n = std::uniform_int_distribution<int>(2, 4)(rng);
    idx.a = testing::random_rational(rng, 4, 0, 1);
    if (idx.a <= 0) continue;
    idx.sigma = 1;
    idx.p = idx.ptilde = RecipExponent(testing::random_rational(rng, 6, 0, 1));
    idx.q = idx.qtilde = RecipExponent(testing::random_rational(rng, 6, 0, 1));
    idx.r = idx.rtilde = RecipExponent(testing::random_rational(rng, 6, 0, 1));
    idx.alpha = testing::random_rational(rng, 4, -2, 2);
    idx.beta = testing::random_rational(rng, 4, -2, 2);
    const Rational delta = ckn_deltas(idx).first;
    idx.gamma = delta + idx.a * idx.alpha + (1 - idx.a) * idx.beta;
    if (delta < 0 || delta > idx.a) continue;
    if (!check_ckn(idx, false).admissible) continue;
    ++hits;
    REQUIRE(check_ckn_classical(idx).admissible);
  }
  CHECK(hits > 50);
}

TEST_CASE("verdicts are reproducible") {
  const auto idx = mixed(3, "2/3", "1/5", "1/2", "1/4", "1/7", "2/9", "3/2");
  CHECK(check_mixed_stein_weiss(idx, MixedMode::general) ==
        check_mixed_stein_weiss(idx, MixedMode::general));
}

TEST_CASE("radial ckn contains classical ckn for p <= n and delta <= a") {
  std::mt19937_64 rng(1234);
  int hits = 0;
  for (int i = 0; i < 40000 && hits < 300; ++i) {
    CknIndices idx;
    idx.n = std::uniform_int_distribution<int>(2, 4)(rng);
    idx.a = testing::random_rational(rng, 4, 0, 1);
    if (idx.a <= 0) continue;
    idx.sigma = 1;
    idx.p = idx.ptilde = RecipExponent(testing::random_rational(rng, 6, 0, 1));
    idx.q = idx.qtilde = RecipExponent(testing::random_rational(rng, 6, 0, 1));
    idx.r = idx.rtilde = RecipExponent(testing::random_rational(rng, 6, 0, 1));
    idx.alpha = testing::random_rational(rng, 4, -2, 2);
    idx.beta = testing::random_rational(rng, 4, -2, 2);
    const Rational nn(idx.n);
    const Rational delta =
        idx.a + nn * (idx.r.value() - (1 - idx.a) * idx.q.value() - idx.a * idx.p.value());
    idx.gamma = nn * idx.r.value() + idx.a * (idx.alpha + 1 - nn * idx.p.value()) +
                (1 - idx.a) * (idx.beta - nn * idx.q.value());
    if (nn * idx.p.value() < 1 || delta > idx.a) continue;
    if (!(idx.alpha < nn * idx.p.value() - 1)) continue;
    if (!check_ckn_classical(idx).admissible) continue;
    ++hits;
    REQUIRE(check_ckn_radial(idx).admissible);
  }
  CHECK(hits > 50);
}

TEST_CASE("radial ckn rejects delta > a off the trigger line") {
  CknIndices idx = hardy();
  idx.a = Q("1/2");
  idx.r = idx.rtilde = R("2/3");
  idx.alpha = 0;
  idx.beta = 0;
  idx.gamma = 1;
  const Verdict classical = check_ckn_classical(idx);
  CHECK(classical.admissible);
  CHECK(cond(classical, "delta_le_a").vacuous);
  const Verdict radial = check_ckn_radial(idx);
  CHECK_FALSE(radial.admissible);
  CHECK(radial.first_failed() == "delta_band");
}
