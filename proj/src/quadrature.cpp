#include "advest/quadrature.hpp"

#include <cstdlib>
#include <map>
#include <mutex>

namespace advest {

namespace detail {

namespace {
std::mutex cache_mutex;
std::map<int, std::pair<std::vector<long double>, std::vector<long double>>> cache_ld;

const std::pair<std::vector<long double>, std::vector<long double>>& rule_ld(int q) {
  std::lock_guard<std::mutex> lock(cache_mutex);
  auto it = cache_ld.find(q);
  if (it == cache_ld.end()) {
    std::vector<long double> x, w;
    gauss_nodes<long double>(q, x, w);
    it = cache_ld.emplace(q, std::make_pair(std::move(x), std::move(w))).first;
  }
  return it->second;
}
} // namespace

const std::vector<long double>& gauss_nodes_ld(int q) { return rule_ld(q).first; }
const std::vector<long double>& gauss_weights_ld(int q) { return rule_ld(q).second; }

} // namespace detail

int analytic_quad_order() {
  static const int order = [] {
    const char* env = std::getenv("ADVEST_QUAD_ORDER");
    if (!env || !*env) return 15;
    const int q = std::atoi(env);
    if (q < 1 || q > 30)
      throw std::invalid_argument("ADVEST_QUAD_ORDER must be in [1, 30]");
    return q;
  }();
  return order;
}

const QuadRule& gauss_rule(int q) {
  if (q < 1 || q > 30)
    throw std::invalid_argument("gauss_rule: q must be in [1, 30]");
  static std::mutex m;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(q);
  if (it == cache.end()) {
    const auto& x = detail::gauss_nodes_ld(q);
    const auto& w = detail::gauss_weights_ld(q);
    QuadRule r;
    r.nodes.assign(x.begin(), x.end());
    r.weights.assign(w.begin(), w.end());
    it = cache.emplace(q, std::move(r)).first;
  }
  return it->second;
}

} // namespace advest
