// Exhaustive reference computations for tests. They look only at a truth
// table, never at a diagram, so they share no code with the library.
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

using Mask = std::uint32_t;

/// table[p] is the class of point p; bit i of p is feature i+1.
struct Table {
  int m = 0;
  std::vector<int> cls;

  template <typename F> static Table of(int m, F &&f) {
    Table t;
    t.m = m;
    t.cls.resize(std::size_t{1} << m);
    std::vector<int> point(m);
    for (Mask p = 0; p < t.cls.size(); ++p) {
      for (int i = 0; i < m; ++i)
        point[i] = (p >> i) & 1;
      t.cls[p] = f(point);
    }
    return t;
  }
};

inline Mask mask_of(const std::vector<int> &point) {
  Mask p = 0;
  for (std::size_t i = 0; i < point.size(); ++i)
    if (point[i])
      p |= Mask{1} << i;
  return p;
}

/// Every point agreeing with v on X has class c.
inline bool weak_axp(const Table &t, Mask v, int c, Mask x) {
  for (Mask p = 0; p < t.cls.size(); ++p)
    if (((p ^ v) & x) == 0 && t.cls[p] != c)
      return false;
  return true;
}

/// Some point agreeing with v outside Y has a class other than c.
inline bool weak_cxp(const Table &t, Mask v, int c, Mask y) {
  const Mask fixed = ~y & ((Mask{1} << t.m) - 1);
  for (Mask p = 0; p < t.cls.size(); ++p)
    if (((p ^ v) & fixed) == 0 && t.cls[p] != c)
      return true;
  return false;
}

template <typename Pred> std::vector<Mask> minimal(int m, Pred holds) {
  std::vector<Mask> sat;
  for (Mask x = 0; x < (Mask{1} << m); ++x)
    if (holds(x))
      sat.push_back(x);
  std::vector<Mask> out;
  for (Mask x : sat) {
    bool min = true;
    for (Mask y : sat)
      if (y != x && (y & x) == y) {
        min = false;
        break;
      }
    if (min)
      out.push_back(x);
  }
  return out;
}

inline std::vector<Mask> axps(const Table &t, Mask v, int c) {
  return minimal(t.m, [&](Mask x) { return weak_axp(t, v, c, x); });
}

inline std::vector<Mask> cxps(const Table &t, Mask v, int c) {
  return minimal(t.m, [&](Mask y) { return weak_cxp(t, v, c, y); });
}

inline bool member(const std::vector<Mask> &sets, int feature) {
  return std::any_of(sets.begin(), sets.end(),
                     [&](Mask s) { return (s >> (feature - 1)) & 1; });
}

/// Minimal hitting sets of a family over m elements.
inline std::vector<Mask> mhs(int m, const std::vector<Mask> &family) {
  return minimal(m, [&](Mask h) {
    return std::all_of(family.begin(), family.end(), [&](Mask s) { return (s & h) != 0; });
  });
}

inline std::vector<int> members(Mask x) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if ((x >> i) & 1)
      out.push_back(i + 1);
  return out;
}

/// Sample classifier: (Y and P) or (P and W) or (W and M), P=1 Y=2 M=3 W=4.
inline int kappa(const std::vector<int> &x) {
  const bool P = x[0], Y = x[1], M = x[2], W = x[3];
  return (Y && P) || (P && W) || (W && M);
}

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace oracle
