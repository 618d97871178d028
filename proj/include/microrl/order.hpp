#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"

namespace microrl {

// Guard on one value-vector component. `upper` caps the component from above
// (keep v[index] below bound); otherwise the component must exceed the bound.
// Bounds are strict, and values within tolerance of the bound count as
// violations, so guards never admit a vector on the strength of rounding.
struct ThresholdGuard {
  int index = 0;
  double bound = 0.0;
  bool upper = true;
  bool operator==(const ThresholdGuard&) const = default;
};

// Preference structure over value vectors. One type covers the five shipped
// families; `kind` selects which member fields apply.
//
//   pareto     componentwise
//   lex        listed indices compared first, in order; ties fall through to
//              componentwise comparison on the unlisted indices
//   weighted   single weighted sum (a total preorder)
//   threshold  guard violators rank below satisfiers; ties use `fallback`
//   product    componentwise on per-group products of components
struct PartialOrderSpec {
  enum class Kind { pareto, lex, weighted, threshold, product };

  Kind kind = Kind::pareto;
  std::vector<int> priority;                         // lex
  std::vector<double> weights;                       // weighted
  std::vector<ThresholdGuard> guards;                // threshold
  std::shared_ptr<const PartialOrderSpec> fallback;  // threshold
  std::vector<std::vector<int>> groups;              // product

  static PartialOrderSpec pareto_order() { return {}; }

  static PartialOrderSpec lex_order(std::vector<int> priority) {
    PartialOrderSpec s;
    s.kind = Kind::lex;
    s.priority = std::move(priority);
    return s;
  }

  static PartialOrderSpec weighted_order(std::vector<double> weights) {
    PartialOrderSpec s;
    s.kind = Kind::weighted;
    s.weights = std::move(weights);
    return s;
  }

  static PartialOrderSpec threshold_order(std::vector<ThresholdGuard> guards,
                                          PartialOrderSpec fallback) {
    PartialOrderSpec s;
    s.kind = Kind::threshold;
    s.guards = std::move(guards);
    s.fallback = std::make_shared<const PartialOrderSpec>(std::move(fallback));
    return s;
  }

  static PartialOrderSpec product_order(std::vector<std::vector<int>> groups) {
    PartialOrderSpec s;
    s.kind = Kind::product;
    s.groups = std::move(groups);
    return s;
  }

  bool operator==(const PartialOrderSpec& o) const {
    if (kind != o.kind || priority != o.priority || weights != o.weights ||
        guards != o.guards || groups != o.groups)
      return false;
    if (!fallback != !o.fallback) return false;
    return !fallback || *fallback == *o.fallback;
  }
};

// First problem with `spec` applied to vectors of length k, if any. Used by
// task validation; comparison functions below throw on the same problems.
inline std::optional<std::string> order_spec_problem(const PartialOrderSpec& spec, int k) {
  using Kind = PartialOrderSpec::Kind;
  switch (spec.kind) {
    case Kind::pareto:
      return std::nullopt;
    case Kind::lex: {
      std::vector<bool> seen(k, false);
      for (int i : spec.priority) {
        if (i < 0 || i >= k) return "lex priority index " + std::to_string(i) + " out of range";
        if (seen[i]) return "lex priority lists index " + std::to_string(i) + " twice";
        seen[i] = true;
      }
      return std::nullopt;
    }
    case Kind::weighted:
      if (static_cast<int>(spec.weights.size()) != k)
        return "weighted order has " + std::to_string(spec.weights.size()) + " weights for " +
               std::to_string(k) + " objectives";
      for (double w : spec.weights)
        if (!std::isfinite(w)) return std::string("weighted order has a non-finite weight");
      return std::nullopt;
    case Kind::threshold: {
      std::vector<bool> guarded(k, false);
      for (const auto& g : spec.guards) {
        if (g.index < 0 || g.index >= k)
          return "threshold guard index " + std::to_string(g.index) + " out of range";
        if (guarded[g.index])
          return "threshold order guards index " + std::to_string(g.index) + " twice";
        guarded[g.index] = true;
      }
      if (!spec.fallback) return std::string("threshold order lacks a fallback order");
      return order_spec_problem(*spec.fallback, k);
    }
    case Kind::product: {
      if (spec.groups.empty()) return std::string("product order has no groups");
      for (const auto& g : spec.groups) {
        if (g.empty()) return std::string("product order has an empty group");
        for (int i : g)
          if (i < 0 || i >= k)
            return "product group index " + std::to_string(i) + " out of range";
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

// u is weakly below v. Throws std::invalid_argument on mismatched lengths or
// a spec that does not fit the vectors.
inline bool leq(const PartialOrderSpec& spec, std::span<const double> u,
                std::span<const double> v, double tol = kValueTolerance) {
  if (u.size() != v.size())
    throw std::invalid_argument("order comparison: vectors of different length");
  if (auto problem = order_spec_problem(spec, static_cast<int>(u.size())))
    throw std::invalid_argument("order comparison: " + *problem);

  using Kind = PartialOrderSpec::Kind;
  switch (spec.kind) {
    case Kind::pareto: {
      for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] > v[i] + tol) return false;
      return true;
    }
    case Kind::lex: {
      std::vector<bool> listed(u.size(), false);
      for (int i : spec.priority) {
        listed[i] = true;
        if (u[i] < v[i] - tol) return true;
        if (u[i] > v[i] + tol) return false;
      }
      for (std::size_t i = 0; i < u.size(); ++i)
        if (!listed[i] && u[i] > v[i] + tol) return false;
      return true;
    }
    case Kind::weighted: {
      double du = 0.0, dv = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        du += spec.weights[i] * u[i];
        dv += spec.weights[i] * v[i];
      }
      return du <= dv + tol;
    }
    case Kind::threshold: {
      auto satisfies = [&](std::span<const double> x) {
        for (const auto& g : spec.guards) {
          bool ok = g.upper ? x[g.index] < g.bound - tol : x[g.index] > g.bound + tol;
          if (!ok) return false;
        }
        return true;
      };
      bool su = satisfies(u), sv = satisfies(v);
      if (su != sv) return sv;
      return leq(*spec.fallback, u, v, tol);
    }
    case Kind::product: {
      for (const auto& g : spec.groups) {
        double pu = 1.0, pv = 1.0;
        for (int i : g) {
          pu *= u[i];
          pv *= v[i];
        }
        if (pu > pv + tol) return false;
      }
      return true;
    }
  }
  return false;
}

// u is strictly above v: v ranks weakly below u and u does not rank weakly
// below v.
inline bool strictly_dominates(const PartialOrderSpec& spec, std::span<const double> u,
                               std::span<const double> v, double tol = kValueTolerance) {
  return leq(spec, v, u, tol) && !leq(spec, u, v, tol);
}

// Indices of vectors no other vector strictly dominates. Never empty for
// non-empty input.
inline std::vector<std::size_t> maximal_elements(const PartialOrderSpec& spec,
                                                 const std::vector<std::vector<double>>& vectors,
                                                 double tol = kValueTolerance) {
  std::vector<std::size_t> result;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < vectors.size() && !dominated; ++j)
      dominated = j != i && strictly_dominates(spec, vectors[j], vectors[i], tol);
    if (!dominated) result.push_back(i);
  }
  return result;
}

// Empirical axiom check over a finite sample of vectors. Antisymmetry
// failures (mutually comparable vectors that differ beyond tolerance)
// downgrade the relation to a preorder; reflexivity or transitivity failures
// mean the comparison is not a preorder at all.
struct OrderAxiomReport {
  bool reflexive = true;
  bool transitive = true;
  bool antisymmetric = true;
  std::vector<std::string> notes;

  bool partial_order() const { return reflexive && transitive && antisymmetric; }
  std::string classification() const {
    if (!reflexive || !transitive) return "not a preorder";
    return antisymmetric ? "partial order" : "preorder only";
  }
};

inline OrderAxiomReport check_order_axioms(const PartialOrderSpec& spec,
                                           const std::vector<std::vector<double>>& vectors,
                                           double tol = kValueTolerance) {
  OrderAxiomReport report;
  auto describe = [](std::span<const double> x) {
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i) s += ", ";
      s += std::to_string(x[i]);
    }
    return s + ")";
  };
  auto near_equal = [&](std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
  };

  const std::size_t n = vectors.size();
  for (std::size_t i = 0; i < n; ++i)
    if (!leq(spec, vectors[i], vectors[i], tol)) {
      report.reflexive = false;
      report.notes.push_back("not reflexive at " + describe(vectors[i]));
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (leq(spec, vectors[i], vectors[j], tol) && leq(spec, vectors[j], vectors[i], tol) &&
          !near_equal(vectors[i], vectors[j]) && report.antisymmetric) {
        report.antisymmetric = false;
        report.notes.push_back("antisymmetry fails between " + describe(vectors[i]) + " and " +
                               describe(vectors[j]));
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (leq(spec, vectors[i], vectors[j], tol) && leq(spec, vectors[j], vectors[k], tol) &&
            !leq(spec, vectors[i], vectors[k], tol)) {
          if (report.transitive) {
            report.transitive = false;
            report.notes.push_back("transitivity fails through " + describe(vectors[j]));
          }
        }
      }
    }
  return report;
}

}  // namespace microrl
