#include "advest/source.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "advest/errors.hpp"
#include "advest/quadrature.hpp"

namespace advest {

namespace {
constexpr long double kPi = std::numbers::pi_v<long double>;

long double poly_eval(const std::vector<double>& a, long double x) {
  long double s = 0.0L;
  for (auto it = a.rbegin(); it != a.rend(); ++it) s = s * x + (long double)*it;
  return s;
}

// Antiderivative of the global polynomial, zero constant term.
long double poly_prim(const std::vector<double>& a, long double x) {
  long double s = 0.0L;
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    s = s * x + (long double)a[i] / (i + 1);
  return s * x;
}

long double arctan_prim(long double x) {
  return x * std::atan(x) - 0.5L * std::log1p(x * x);
}
} // namespace

SourceTerm SourceTerm::arctan_source() {
  SourceTerm s;
  s.kind_ = Kind::arctan;
  return s;
}

SourceTerm SourceTerm::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("SourceTerm: empty polynomial");
  SourceTerm s;
  s.kind_ = Kind::polynomial;
  s.poly_ = std::move(coeffs);
  return s;
}

SourceTerm SourceTerm::cell_sine_quadratic() {
  SourceTerm s;
  s.kind_ = Kind::cell_sine_quadratic;
  s.poly_ = {0.0, 1.0, 1.0}; // x^2 + x, plus the per-element constant
  return s;
}

SourceTerm SourceTerm::make_callable(std::function<double(double)> f,
                                     std::function<double(double)> antiderivative) {
  if (!f) throw std::invalid_argument("SourceTerm: null callable");
  SourceTerm s;
  s.kind_ = Kind::callable;
  s.fn_ = std::move(f);
  s.fn_anti_ = std::move(antiderivative);
  return s;
}

int SourceTerm::broken_degree() const {
  switch (kind_) {
    case Kind::polynomial: return static_cast<int>(poly_.size()) - 1;
    case Kind::cell_sine_quadratic: return 2;
    default: return -1;
  }
}

bool SourceTerm::antiderivative_available() const {
  return kind_ != Kind::callable || static_cast<bool>(fn_anti_);
}

double SourceTerm::eval(const Mesh1D& bind, double x) const {
  switch (kind_) {
    case Kind::arctan: return std::atan(x);
    case Kind::polynomial: return static_cast<double>(poly_eval(poly_, x));
    case Kind::cell_sine_quadratic: {
      const int e = bind.find_element(x);
      const double c = static_cast<double>(std::sin(2.0L * kPi * (long double)bind.x_left(e)));
      return x * x + x + c;
    }
    case Kind::callable: return fn_(x);
  }
  return 0.0;
}

std::string SourceTerm::spec() const {
  switch (kind_) {
    case Kind::arctan: return "arctan";
    case Kind::cell_sine_quadratic: return "table81";
    case Kind::polynomial: {
      std::string s = "poly:";
      char buf[64];
      for (std::size_t i = 0; i < poly_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", poly_[i]);
        if (i) s += ',';
        s += buf;
      }
      return s;
    }
    case Kind::callable: return "<callable>";
  }
  return "";
}

SourceTerm SourceTerm::parse(const std::string& spec) {
  if (spec == "arctan") return arctan_source();
  if (spec == "table81") return cell_sine_quadratic();
  if (spec.rfind("poly:", 0) == 0) {
    std::vector<double> c;
    std::string body = spec.substr(5);
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t next = body.find(',', pos);
      std::string tok = body.substr(pos, next == std::string::npos ? std::string::npos
                                                                   : next - pos);
      try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        c.push_back(v);
      } catch (const std::exception&) {
        throw ConfigError("invalid source spec: bad coefficient '" + tok + "' in '" +
                          spec + "'");
      }
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (c.empty()) throw ConfigError("invalid source spec: empty coefficient list");
    return polynomial(std::move(c));
  }
  throw ConfigError("invalid source spec '" + spec +
                    "' (expected arctan | poly:<c0,c1,...> | table81)");
}

BoundSource::BoundSource(const SourceTerm& src, const Mesh1D& bind)
    : src_(src), bind_(&bind) {
  const int n = bind.n_elements();
  if (src.kind() == SourceTerm::Kind::cell_sine_quadratic) {
    cell_c_.resize(n);
    for (int e = 0; e < n; ++e)
      cell_c_[e] = std::sin(2.0L * kPi * (long double)bind.x_left(e));
  }
  if (src.antiderivative_available()) {
    Fv_.resize(n + 1);
    Fv_[0] = 0.0L;
    for (int e = 0; e < n; ++e) {
      const long double xl = bind.x_left(e), xr = bind.x_right(e);
      Fv_[e + 1] = Fv_[e] + (prim_local(e, xr) - prim_local(e, xl));
    }
  }
}

long double BoundSource::f_local(int be, long double x) const {
  switch (src_.kind()) {
    case SourceTerm::Kind::arctan: return std::atan(x);
    case SourceTerm::Kind::polynomial: return poly_eval(src_.poly_coeffs(), x);
    case SourceTerm::Kind::cell_sine_quadratic: return x * x + x + cell_c_[be];
    case SourceTerm::Kind::callable: return src_.fn()(static_cast<double>(x));
  }
  return 0.0L;
}

long double BoundSource::prim_local(int be, long double x) const {
  switch (src_.kind()) {
    case SourceTerm::Kind::arctan: return arctan_prim(x);
    case SourceTerm::Kind::polynomial: return poly_prim(src_.poly_coeffs(), x);
    case SourceTerm::Kind::cell_sine_quadratic:
      return x * x * x / 3.0L + x * x / 2.0L + cell_c_[be] * x;
    case SourceTerm::Kind::callable:
      if (src_.fn_antiderivative())
        return src_.fn_antiderivative()(static_cast<double>(x));
      throw std::logic_error("BoundSource: antiderivative unavailable");
  }
  return 0.0L;
}

long double BoundSource::f(long double x) const {
  const int be = bind_->find_element(static_cast<double>(x));
  return f_local(be, x);
}

long double BoundSource::F(long double x) const {
  if (!src_.antiderivative_available())
    throw std::logic_error("BoundSource: antiderivative unavailable");
  const int be = bind_->find_element(static_cast<double>(x));
  return Fv_[be] + (prim_local(be, x) - prim_local(be, (long double)bind_->x_left(be)));
}

template <typename S>
VecX<S> BoundSource::modal(int be, S xl, S h, int degree, int q_analytic) const {
  int q;
  if (src_.piecewise_polynomial()) {
    const int d = src_.broken_degree();
    q = (d + degree) / 2 + 1;
  } else {
    q = q_analytic;
  }
  const auto& nodes_ld = detail::gauss_nodes_ld(q);
  const auto& weights_ld = detail::gauss_weights_ld(q);
  std::vector<S> nodes(nodes_ld.begin(), nodes_ld.end());
  std::vector<S> weights(weights_ld.begin(), weights_ld.end());
  std::vector<S> fvals(q);
  for (int p = 0; p < q; ++p) {
    const S x = xl + h * (nodes[p] + S(1)) / S(2);
    fvals[p] = static_cast<S>(f_local(be, (long double)x));
  }
  return legendre::project_values<S>(degree, h, nodes, weights, fvals);
}

template VecX<double> BoundSource::modal<double>(int, double, double, int, int) const;
template VecX<long double> BoundSource::modal<long double>(int, long double,
                                                           long double, int, int) const;

AdvectionProblem::AdvectionProblem(double beta_, SourceTerm source_)
    : beta(beta_), source(std::move(source_)) {
  if (beta == 0.0 || !std::isfinite(beta))
    throw std::invalid_argument("AdvectionProblem: velocity must be nonzero and finite");
}

long double AdvectionProblem::exact_u(const BoundSource& bound, long double x) const {
  const long double Fin =
      beta > 0 ? 0.0L : bound.F((long double)bound.mesh().right());
  return (bound.F(x) - Fin) / (long double)beta;
}

} // namespace advest
