#include "roughsum/test_function.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace roughsum {

Complex unit_root(double r) {
  r -= std::floor(r);
  const double quarters = r * 4.0;
  if (quarters == std::floor(quarters)) {
    switch (static_cast<int>(quarters) & 3) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  const double angle = 2.0 * std::numbers::pi * r;
  return {std::cos(angle), std::sin(angle)};
}

Complex unit_root(std::int64_t k, std::int64_t m) {
  if (m <= 0) throw std::invalid_argument("unit_root: denominator must be positive");
  k %= m;
  if (k < 0) k += m;
  if ((4 * k) % m == 0) return unit_root(static_cast<double>((4 * k) / m) / 4.0);
  return unit_root(static_cast<double>(k) / static_cast<double>(m));
}

double phase_mod_one(double alpha, std::int64_t n) {
  const auto nd = static_cast<double>(n);
  const double p = alpha * nd;
  const double err = std::fma(alpha, nd, -p);  // alpha*n == p + err exactly
  double r = (p - std::floor(p)) + err;
  r -= std::floor(r);
  return r >= 1.0 ? 0.0 : r;
}

namespace {

// m < 2^31, so products fit in 64 bits.
std::int64_t pow_mod(std::int64_t b, std::int64_t e, std::int64_t m) {
  std::int64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

bool is_prime_trial(std::int64_t q) {
  if (q < 2) return false;
  for (std::int64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) return false;
  }
  return true;
}

constexpr std::int64_t kMaxCharacterModulus = 10'000'000;

}  // namespace

std::int64_t primitive_root(std::int64_t q) {
  if (!is_prime_trial(q)) throw std::invalid_argument("primitive_root: modulus must be prime");
  if (q == 2) return 1;
  std::vector<std::int64_t> factors;
  std::int64_t m = q - 1;
  for (std::int64_t d = 2; d * d <= m; ++d) {
    if (m % d == 0) {
      factors.push_back(d);
      while (m % d == 0) m /= d;
    }
  }
  if (m > 1) factors.push_back(m);
  for (std::int64_t g = 2; g < q; ++g) {
    bool generator = true;
    for (std::int64_t r : factors) {
      if (pow_mod(g, (q - 1) / r, q) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return g;
  }
  throw std::logic_error("primitive_root: none found");
}

namespace {

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(v)) {
    throw std::invalid_argument("function spec: malformed " + std::string(what) + " '" +
                                std::string(s) + "'");
  }
  return v;
}

std::int64_t parse_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw std::invalid_argument("function spec: malformed " + std::string(what) + " '" +
                                std::string(s) + "'");
  }
  return v;
}

}  // namespace

FunctionSpec parse_function_spec(std::string_view text) {
  FunctionSpec spec;
  spec.text = std::string(text);
  const auto eq = text.find('=');
  const std::string_view head = text.substr(0, eq);
  const std::string_view arg = eq == std::string_view::npos ? std::string_view{} : text.substr(eq + 1);
  const bool has_arg = eq != std::string_view::npos;

  if (head == "const") {
    spec.kind = ConstantSpec{has_arg ? parse_double(arg, "constant") : 1.0};
  } else if (head == "expo") {
    if (!has_arg) throw std::invalid_argument("function spec: expo needs '=<alpha>'");
    spec.kind = PhaseSpec{parse_double(arg, "alpha")};
  } else if (head == "char") {
    const auto comma = arg.find(',');
    if (!has_arg || comma == std::string_view::npos) {
      throw std::invalid_argument("function spec: char needs '=<q>,<index>'");
    }
    const std::int64_t q = parse_int(arg.substr(0, comma), "character modulus");
    const std::int64_t index = parse_int(arg.substr(comma + 1), "character index");
    if (q < 2 || q > kMaxCharacterModulus || !is_prime_trial(q)) {
      throw std::invalid_argument("function spec: character modulus must be a prime <= " +
                                  std::to_string(kMaxCharacterModulus));
    }
    if (index < 0 || index >= q - 1) {
      throw std::invalid_argument("function spec: character index must lie in [0, q-2]");
    }
    spec.kind = CharacterSpec{q, index};
  } else if (head == "table") {
    if (!has_arg || arg.empty()) throw std::invalid_argument("function spec: table needs '=<path>'");
    spec.kind = TableSpec{std::string(arg)};
  } else {
    throw std::invalid_argument("function spec: unknown kind '" + std::string(head) +
                                "' (expected const, expo, char or table)");
  }
  return spec;
}

TestFunction TestFunction::constant(Complex c) { return TestFunction(Constant{c}, std::abs(c)); }

TestFunction TestFunction::exponential_phase(double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("exponential_phase: alpha must be finite");
  return TestFunction(Phase{alpha}, 1.0);
}

TestFunction TestFunction::dirichlet_character(std::int64_t q, std::int64_t index) {
  if (q < 2 || q > kMaxCharacterModulus || !is_prime_trial(q)) {
    throw std::invalid_argument("dirichlet_character: modulus must be a prime <= " +
                                std::to_string(kMaxCharacterModulus));
  }
  if (index < 0 || index >= q - 1) {
    throw std::invalid_argument("dirichlet_character: index must lie in [0, q-2]");
  }
  const std::int64_t g = primitive_root(q);
  std::vector<std::int64_t> dlog(static_cast<std::size_t>(q), 0);
  std::int64_t power = 1;
  for (std::int64_t k = 0; k < q - 1; ++k) {
    dlog[power] = k;
    power = power * g % q;
  }
  return TestFunction(Character{q, index, std::move(dlog)}, 1.0);
}

TestFunction TestFunction::table(std::vector<Complex> values) {
  double bound = 0.0;
  for (const Complex& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("table: non-finite value");
    }
    bound = std::max(bound, std::abs(v));
  }
  return TestFunction(Table{std::move(values)}, bound);
}

TestFunction TestFunction::from_spec(const FunctionSpec& spec) {
  return std::visit(
      [&](const auto& k) -> TestFunction {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ConstantSpec>) {
          return constant(k.value);
        } else if constexpr (std::is_same_v<K, PhaseSpec>) {
          return exponential_phase(k.alpha);
        } else if constexpr (std::is_same_v<K, CharacterSpec>) {
          return dirichlet_character(k.modulus, k.index);
        } else {
          std::ifstream in(k.path);
          if (!in) throw std::runtime_error("table: cannot open '" + k.path + "'");
          std::vector<Complex> values;
          std::string line;
          std::size_t lineno = 0;
          while (std::getline(in, line)) {
            ++lineno;
            std::istringstream fields(line);
            double re = 0.0;
            double im = 0.0;
            if (!(fields >> re)) {
              throw std::invalid_argument("table: bad value on line " + std::to_string(lineno));
            }
            fields >> im;
            values.emplace_back(re, im);
          }
          return table(std::move(values));
        }
      },
      spec.kind);
}

Complex TestFunction::operator()(std::int64_t n) const {
  return std::visit(
      [n](const auto& r) -> Complex {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Constant>) {
          return r.c;
        } else if constexpr (std::is_same_v<R, Phase>) {
          return unit_root(phase_mod_one(r.alpha, n));
        } else if constexpr (std::is_same_v<R, Character>) {
          std::int64_t res = n % r.q;
          if (res < 0) res += r.q;
          if (res == 0) return {0.0, 0.0};
          return unit_root(r.index * r.dlog[res], r.q - 1);
        } else {
          if (n < 1 || n > static_cast<std::int64_t>(r.values.size())) return {0.0, 0.0};
          return r.values[static_cast<std::size_t>(n - 1)];
        }
      },
      rep_);
}

std::vector<Complex> TestFunction::sample(std::int64_t x) const {
  std::vector<Complex> out(static_cast<std::size_t>(std::max<std::int64_t>(x, 0)) + 1);
  for (std::int64_t n = 0; n <= x; ++n) out[n] = (*this)(n);
  return out;
}

double TestFunction::alpha() const {
  if (const auto* p = std::get_if<Phase>(&rep_)) return p->alpha;
  return 0.0;
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, Constant>) {
          os << "const(" << r.c.real() << "," << r.c.imag() << ")";
        } else if constexpr (std::is_same_v<R, Phase>) {
          os << "e(" << r.alpha << " n)";
        } else if constexpr (std::is_same_v<R, Character>) {
          os << "chi_" << r.q << "[" << r.index << "]";
        } else {
          os << "table[" << r.values.size() << "]";
        }
      },
      rep_);
  return os.str();
}

}  // namespace roughsum
