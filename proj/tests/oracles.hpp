#pragma once

// Independent scalar definitions of the grouped statistics, used to check the
// engine kernels. Everything here works on plain per-group value/weight
// sequences and is deliberately written as the naive textbook computation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

using OptD = std::optional<double>;
using Seq = std::vector<OptD>;

struct Pairs {
  std::vector<double> x;
  std::vector<double> w;  // 1.0 when unweighted
};

// Applies the missing-value policy: na_rm=true drops pairs with a missing
// value or weight; na_rm=false reports "poisoned" when any such pair exists.
inline std::optional<Pairs> gather(const Seq& x, const Seq* w, bool na_rm) {
  Pairs p;
  for (size_t i = 0; i < x.size(); ++i) {
    bool ok = x[i].has_value() && (!w || (*w)[i].has_value());
    if (!ok) {
      if (!na_rm) return std::nullopt;
      continue;
    }
    p.x.push_back(*x[i]);
    p.w.push_back(w ? *(*w)[i] : 1.0);
  }
  return p;
}

inline OptD sum(const Seq& x, const Seq* w, bool na_rm) {
  auto p = gather(x, w, na_rm);
  if (!p || p->x.empty()) return std::nullopt;
  double s = 0.0;
  for (size_t i = 0; i < p->x.size(); ++i) s += (w ? p->w[i] * p->x[i] : p->x[i]);
  return s;
}

inline OptD prod(const Seq& x, const Seq* w, bool na_rm) {
  auto p = gather(x, w, na_rm);
  if (!p || p->x.empty()) return std::nullopt;
  double s = 1.0;
  for (size_t i = 0; i < p->x.size(); ++i)
    s *= (w ? std::pow(p->x[i], p->w[i]) : p->x[i]);
  if (std::isnan(s)) return std::nullopt;
  return s;
}

inline OptD mean(const Seq& x, const Seq* w, bool na_rm) {
  auto p = gather(x, w, na_rm);
  if (!p || p->x.empty()) return std::nullopt;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < p->x.size(); ++i) {
    num += p->w[i] * p->x[i];
    den += p->w[i];
  }
  if (den <= 0.0) return std::nullopt;
  return num / den;
}

inline OptD var(const Seq& x, const Seq* w, bool na_rm) {
  auto p = gather(x, w, na_rm);
  if (!p || p->x.empty()) return std::nullopt;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < p->x.size(); ++i) {
    num += p->w[i] * p->x[i];
    den += p->w[i];
  }
  if (den <= 1.0) return std::nullopt;
  double mu = num / den;
  double ss = 0.0;
  for (size_t i = 0; i < p->x.size(); ++i) ss += p->w[i] * (p->x[i] - mu) * (p->x[i] - mu);
  return ss / (den - 1.0);
}

inline OptD sd(const Seq& x, const Seq* w, bool na_rm) {
  auto v = var(x, w, na_rm);
  if (!v) return std::nullopt;
  return std::sqrt(*v);
}

inline OptD min(const Seq& x, bool na_rm) {
  auto p = gather(x, nullptr, na_rm);
  if (!p || p->x.empty()) return std::nullopt;
  return *std::min_element(p->x.begin(), p->x.end());
}

inline OptD max(const Seq& x, bool na_rm) {
  auto p = gather(x, nullptr, na_rm);
  if (!p || p->x.empty()) return std::nullopt;
  return *std::max_element(p->x.begin(), p->x.end());
}

inline OptD first(const Seq& x, bool na_rm) {
  if (!na_rm) return x.empty() ? std::nullopt : x.front();
  for (const auto& v : x) {
    if (v) return v;
  }
  return std::nullopt;
}

inline OptD last(const Seq& x, bool na_rm) {
  if (!na_rm) return x.empty() ? std::nullopt : x.back();
  for (auto it = x.rbegin(); it != x.rend(); ++it) {
    if (*it) return *it;
  }
  return std::nullopt;
}

inline std::int64_t nobs(const Seq& x, bool na_rm) {
  if (!na_rm) return static_cast<std::int64_t>(x.size());
  std::int64_t n = 0;
  for (const auto& v : x) n += v.has_value() ? 1 : 0;
  return n;
}

inline std::int64_t ndistinct(const Seq& x, bool na_rm) {
  std::set<double> seen;
  bool missing_seen = false;
  for (const auto& v : x) {
    if (v) seen.insert(*v == 0.0 ? 0.0 : *v);
    else missing_seen = true;
  }
  return static_cast<std::int64_t>(seen.size()) + (!na_rm && missing_seen ? 1 : 0);
}

// most frequent value by weight sum; ties go to the earliest first occurrence
inline OptD mode(const Seq& x, const Seq* w, bool na_rm) {
  struct Entry {
    double weight = 0.0;
    size_t first = 0;
    bool missing = false;
  };
  std::map<double, Entry> tally;
  Entry missing_entry;
  bool have_missing = false;
  for (size_t i = 0; i < x.size(); ++i) {
    double wi = 1.0;
    if (w) {
      if (!(*w)[i].has_value()) {
        if (na_rm) continue;
        wi = 0.0;
      } else {
        wi = *(*w)[i];
      }
    }
    if (!x[i].has_value()) {
      if (na_rm) continue;
      if (!have_missing) {
        missing_entry.first = i;
        missing_entry.missing = true;
        have_missing = true;
      }
      missing_entry.weight += wi;
      continue;
    }
    auto [it, fresh] = tally.try_emplace(*x[i] == 0.0 ? 0.0 : *x[i]);
    if (fresh) it->second.first = i;
    it->second.weight += wi;
  }
  const Entry* best = nullptr;
  double best_val = 0.0;
  for (const auto& [val, e] : tally) {
    if (!best || e.weight > best->weight ||
        (e.weight == best->weight && e.first < best->first)) {
      best = &e;
      best_val = val;
    }
  }
  if (have_missing &&
      (!best || missing_entry.weight > best->weight ||
       (missing_entry.weight == best->weight && missing_entry.first < best->first))) {
    return std::nullopt;  // the missing value wins
  }
  if (!best) return std::nullopt;
  return best_val;
}

// Hyndman-Fan plotting positions with the cumulative-weight generalization:
// h uses W in place of n, j = floor(h), and the order statistics are read at
// expanded positions j and j+1 through the cumulative weights.
enum class Ties { q7, q8, lower, upper };

inline OptD quantile(const Seq& x, const Seq* w, double p, Ties ties, bool na_rm) {
  auto pr = gather(x, w, na_rm);
  if (!pr || pr->x.empty()) return std::nullopt;
  std::vector<size_t> idx(pr->x.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return pr->x[a] < pr->x[b]; });
  std::vector<double> v, cum;
  double acc = 0.0;
  for (size_t i : idx) {
    acc += pr->w[i];
    v.push_back(pr->x[i]);
    cum.push_back(acc);
  }
  double W = acc;
  if (W <= 0.0) return std::nullopt;
  double h = ties == Ties::q8 ? (W + 1.0 / 3.0) * p + 1.0 / 3.0 : 1.0 + (W - 1.0) * p;
  h = std::min(std::max(h, 1.0), std::max(W, 1.0));
  auto at = [&](double pos) {
    size_t k = 0;
    while (k + 1 < cum.size() && cum[k] < pos) ++k;
    return v[k];
  };
  if (ties == Ties::lower) return at(std::floor(h));
  if (ties == Ties::upper) return at(std::ceil(h));
  double j = std::floor(h);
  double gamma = h - j;
  double lo = at(j);
  if (gamma == 0.0) return lo;
  return (1.0 - gamma) * lo + gamma * at(j + 1.0);
}

// unweighted closed forms used to pin the unit-weight behavior
inline double hf7(std::vector<double> sorted, double p) {
  std::sort(sorted.begin(), sorted.end());
  double n = static_cast<double>(sorted.size());
  double h = 1.0 + (n - 1.0) * p;
  h = std::min(std::max(h, 1.0), n);
  double j = std::floor(h);
  double gamma = h - j;
  double lo = sorted[static_cast<size_t>(j) - 1];
  if (gamma == 0.0) return lo;
  double hi = sorted[std::min(static_cast<size_t>(j), sorted.size() - 1)];
  return (1.0 - gamma) * lo + gamma * hi;
}

inline double hf8(std::vector<double> sorted, double p) {
  std::sort(sorted.begin(), sorted.end());
  double n = static_cast<double>(sorted.size());
  double h = (n + 1.0 / 3.0) * p + 1.0 / 3.0;
  h = std::min(std::max(h, 1.0), n);
  double j = std::floor(h);
  double gamma = h - j;
  double lo = sorted[static_cast<size_t>(j) - 1];
  if (gamma == 0.0) return lo;
  double hi = sorted[std::min(static_cast<size_t>(j), sorted.size() - 1)];
  return (1.0 - gamma) * lo + gamma * hi;
}

}  // namespace oracle
