#include "lseig/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace lseig {

namespace {

void orbit1(TriQuadRule& r, double w) {
  r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
  r.weights.push_back(w);
}

// Orbit of (1-2a, a, a): three permutations.
void orbit3(TriQuadRule& r, double a, double w) {
  double b = 1.0 - 2.0 * a;
  r.points.push_back({b, a, a});
  r.points.push_back({a, b, a});
  r.points.push_back({a, a, b});
  for (int i = 0; i < 3; ++i) r.weights.push_back(w);
}

// Orbit of (a, b, c) with distinct entries: six permutations.
void orbit6(TriQuadRule& r, double a, double b, double w) {
  double c = 1.0 - a - b;
  r.points.push_back({a, b, c});
  r.points.push_back({a, c, b});
  r.points.push_back({b, a, c});
  r.points.push_back({b, c, a});
  r.points.push_back({c, a, b});
  r.points.push_back({c, b, a});
  for (int i = 0; i < 6; ++i) r.weights.push_back(w);
}

std::vector<TriQuadRule> make_tri_rules() {
  std::vector<TriQuadRule> rules;

  {
    TriQuadRule r;
    r.degree = 1;
    orbit1(r, 1.0);
    rules.push_back(r);
  }
  {
    TriQuadRule r;
    r.degree = 2;
    orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
    rules.push_back(r);
  }
  {
    // Dunavant degree 4, 6 points.
    TriQuadRule r;
    r.degree = 4;
    orbit3(r, 0.445948490915965, 0.223381589678011);
    orbit3(r, 0.091576213509771, 0.109951743655322);
    rules.push_back(r);
  }
  {
    // Dunavant degree 5, 7 points.
    TriQuadRule r;
    r.degree = 5;
    orbit1(r, 0.225);
    orbit3(r, 0.470142064105115, 0.132394152788506);
    orbit3(r, 0.101286507323456, 0.125939180544827);
    rules.push_back(r);
  }
  {
    // Dunavant degree 6, 12 points.
    TriQuadRule r;
    r.degree = 6;
    orbit3(r, 0.249286745170910, 0.116786275726379);
    orbit3(r, 0.063089014491502, 0.050844906370207);
    orbit6(r, 0.310352451033785, 0.636502499121399, 0.082851075618374);
    rules.push_back(r);
  }
  {
    // Dunavant degree 8, 16 points.
    TriQuadRule r;
    r.degree = 8;
    orbit1(r, 0.144315607677787);
    orbit3(r, 0.459292588292723, 0.095091634413425);
    orbit3(r, 0.170569307751760, 0.103217370534718);
    orbit3(r, 0.050547228317031, 0.032458497623198);
    orbit6(r, 0.263112829634638, 0.728492392955404, 0.027230314174435);
    rules.push_back(r);
  }
  return rules;
}

std::vector<EdgeQuadRule> make_edge_rules() {
  // Gauss-Legendre nodes on [-1,1], mapped to [0,1].
  std::vector<std::vector<std::array<double, 2>>> raw = {
      {{0.0, 2.0}},
      {{-1.0 / std::sqrt(3.0), 1.0}, {1.0 / std::sqrt(3.0), 1.0}},
      {{-std::sqrt(0.6), 5.0 / 9.0}, {0.0, 8.0 / 9.0}, {std::sqrt(0.6), 5.0 / 9.0}},
      {{-0.861136311594053, 0.347854845137454},
       {-0.339981043584856, 0.652145154862546},
       {0.339981043584856, 0.652145154862546},
       {0.861136311594053, 0.347854845137454}},
      {{-0.906179845938664, 0.236926885056189},
       {-0.538469310105683, 0.478628670499366},
       {0.0, 0.568888888888889},
       {0.538469310105683, 0.478628670499366},
       {0.906179845938664, 0.236926885056189}}};
  std::vector<EdgeQuadRule> rules;
  for (const auto& rule : raw) {
    EdgeQuadRule r;
    for (const auto& [x, w] : rule) {
      r.points.push_back(0.5 * (x + 1.0));
      r.weights.push_back(0.5 * w);
    }
    rules.push_back(r);
  }
  return rules;
}

}  // namespace

const TriQuadRule& tri_rule(int min_degree) {
  static const std::vector<TriQuadRule> rules = make_tri_rules();
  for (const auto& r : rules)
    if (r.degree >= min_degree) return r;
  throw std::invalid_argument("tri_rule: no rule of degree >= " +
                              std::to_string(min_degree));
}

int max_tri_degree() { return 8; }

const EdgeQuadRule& edge_rule(int npoints) {
  static const std::vector<EdgeQuadRule> rules = make_edge_rules();
  if (npoints < 1 || npoints > static_cast<int>(rules.size()))
    throw std::invalid_argument("edge_rule: unsupported point count");
  return rules[npoints - 1];
}

}  // namespace lseig
