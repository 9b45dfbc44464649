#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "roughsum/test_function.hpp"

using namespace roughsum;

TEST_CASE("unit roots are exact at quarter turns") {
  CHECK(unit_root(0.0) == Complex(1, 0));
  CHECK(unit_root(0.25) == Complex(0, 1));
  CHECK(unit_root(0.5) == Complex(-1, 0));
  CHECK(unit_root(0.75) == Complex(0, -1));
  CHECK(unit_root(3.5) == Complex(-1, 0));
  CHECK(unit_root(2, 8) == Complex(0, 1));
  CHECK(unit_root(-1, 4) == Complex(0, -1));
  const Complex z = unit_root(1, 3);
  CHECK(z.real() == doctest::Approx(-0.5));
  CHECK(z.imag() == doctest::Approx(std::sqrt(3.0) / 2));
}

TEST_CASE("phase reduction matches extended precision") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::int64_t> pick(1, 100'000'000);
  for (double alpha : {std::sqrt(2.0) - 1.0, (1.0 + std::sqrt(5.0)) / 2.0, 0.4142, 1.0 / 7.0}) {
    for (int i = 0; i < 2000; ++i) {
      const std::int64_t n = pick(rng);
      const long double exact = oracle::exact_phase(alpha, n);
      double d = std::fabs(phase_mod_one(alpha, n) - static_cast<double>(exact));
      d = std::min(d, 1.0 - d);
      CHECK(d <= 1e-15);
    }
  }
  CHECK(phase_mod_one(0.5, 3) == 0.5);
  CHECK(phase_mod_one(0.5, 4) == 0.0);
}

TEST_CASE("alternating phase is exactly (-1)^n") {
  const auto f = TestFunction::exponential_phase(0.5);
  for (std::int64_t n = 0; n < 50; ++n) CHECK(f(n) == Complex(n % 2 ? -1.0 : 1.0, 0.0));
}

TEST_CASE("primitive roots") {
  CHECK(primitive_root(5) == 2);
  CHECK(primitive_root(7) == 3);
  CHECK(primitive_root(23) == 5);
  CHECK(primitive_root(2) == 1);
  CHECK_THROWS_AS(primitive_root(15), std::invalid_argument);
}

TEST_CASE("characters are completely multiplicative and vanish off units") {
  for (auto [q, index] : {std::pair<std::int64_t, std::int64_t>{5, 1}, {5, 2}, {7, 1}, {101, 17}}) {
    const auto chi = TestFunction::dirichlet_character(q, index);
    CHECK(chi.modulus_bound() == 1.0);
    for (std::int64_t m = 0; m < 3 * q; ++m) {
      if (m % q == 0) CHECK(chi(m) == Complex(0, 0));
      for (std::int64_t n = 1; n < 2 * q; ++n) {
        const Complex d = chi(m * n) - chi(m) * chi(n);
        CHECK(std::abs(d) <= 1e-12);
      }
    }
    Complex total{};
    for (std::int64_t r = 0; r < q; ++r) total += chi(r);
    CHECK(std::abs(total) <= 1e-12);  // non-principal
  }
  const auto chi5 = TestFunction::dirichlet_character(5, 1);
  // ind_2: 1->0, 2->1, 4->2, 3->3, so chi(2) = e(1/4) = i exactly.
  CHECK(chi5(2) == Complex(0, 1));
  CHECK(chi5(4) == Complex(-1, 0));
  CHECK(chi5(3) == Complex(0, -1));
  CHECK(chi5(6) == Complex(1, 0));
  const auto principal = TestFunction::dirichlet_character(5, 0);
  CHECK(principal(7) == Complex(1, 0));
  CHECK_THROWS_AS(TestFunction::dirichlet_character(6, 1), std::invalid_argument);
  CHECK_THROWS_AS(TestFunction::dirichlet_character(5, 4), std::invalid_argument);
}

TEST_CASE("modulus bound holds on samples") {
  const std::vector<TestFunction> fs = {
      TestFunction::constant({3.0, -4.0}), TestFunction::exponential_phase(0.123),
      TestFunction::dirichlet_character(13, 5),
      TestFunction::table({{1.0, 1.0}, {-2.0, 0.0}, {0.0, 0.5}})};
  for (const auto& f : fs) {
    for (std::int64_t n = 0; n < 500; ++n) CHECK(std::abs(f(n)) <= f.modulus_bound() + 1e-15);
  }
  CHECK(fs[0].modulus_bound() == 5.0);
  CHECK(fs[3].modulus_bound() == 2.0);
  CHECK(fs[3](4) == Complex(0, 0));
  CHECK(fs[3](2) == Complex(-2, 0));
}

TEST_CASE("function spec grammar") {
  auto s = parse_function_spec("expo=0.4142");
  REQUIRE(std::holds_alternative<PhaseSpec>(s.kind));
  CHECK(std::get<PhaseSpec>(s.kind).alpha == 0.4142);
  CHECK(std::get<ConstantSpec>(parse_function_spec("const").kind).value == 1.0);
  CHECK(std::get<ConstantSpec>(parse_function_spec("const=2.5").kind).value == 2.5);
  const auto c = std::get<CharacterSpec>(parse_function_spec("char=5,1").kind);
  CHECK(c.modulus == 5);
  CHECK(c.index == 1);
  CHECK(std::get<TableSpec>(parse_function_spec("table=/tmp/f.txt").kind).path == "/tmp/f.txt");

  for (const char* bad : {"", "expo", "expo=", "expo=abc", "expo=1.5x", "char=5", "char=6,1",
                          "char=5,9", "char=x,1", "table=", "cosine=1", "const=nan"}) {
    CHECK_THROWS_AS(parse_function_spec(bad), std::invalid_argument);
  }
}

TEST_CASE("table specs load from files") {
  const std::string path = "roughsum_table_test.txt";
  {
    std::ofstream out(path);
    out << "1\n-1 0.5\n0.25\n";
  }
  const auto f = TestFunction::from_spec(parse_function_spec("table=" + path));
  CHECK(f(1) == Complex(1, 0));
  CHECK(f(2) == Complex(-1, 0.5));
  CHECK(f(3) == Complex(0.25, 0));
  CHECK(f(4) == Complex(0, 0));
  std::remove(path.c_str());
  CHECK_THROWS(TestFunction::from_spec(parse_function_spec("table=/nonexistent/x.txt")));
}
