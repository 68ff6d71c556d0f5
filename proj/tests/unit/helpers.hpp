#pragma once

#include <set>
#include <string>
#include <vector>

#include "nbhd/formula.hpp"
#include "nbhd/model.hpp"
#include "nbhd/search.hpp"

namespace testing {

using nbhd::Formula;
using nbhd::NeighborhoodFrame;
using nbhd::NeighborhoodModel;
using nbhd::SplitMix64;

inline const std::string kFixtureDir = NBHD_FIXTURE_DIR;

/// Random formula of modal depth at most `depth`. `ops` lists the unary
/// modal operators allowed; `announce` adds announcements (counted as depth).
inline Formula random_formula(SplitMix64& rng, int depth, const std::vector<std::string>& atoms,
                              const std::vector<nbhd::Op>& modal, bool boolean_extras = true,
                              bool announce = false, int size = 4) {
  using nbhd::Op;
  if (size <= 1 || rng.below(4) == 0) {
    std::uint64_t pick = rng.below(atoms.size() + (boolean_extras ? 2 : 1));
    if (pick < atoms.size()) return nbhd::atom(atoms[pick]);
    if (pick == atoms.size()) return nbhd::top();
    return nbhd::bot();
  }
  std::vector<int> choices = {0, 1};  // not, and
  if (boolean_extras) choices.insert(choices.end(), {2, 3, 4});
  if (depth > 0 && !modal.empty()) choices.insert(choices.end(), {5, 5});
  if (depth > 0 && announce) choices.push_back(6);
  const int c = choices[rng.below(choices.size())];
  const int sub = size - 1;
  auto rec = [&](int d, int s) {
    return random_formula(rng, d, atoms, modal, boolean_extras, announce, s);
  };
  switch (c) {
    case 0: return nbhd::neg(rec(depth, sub));
    case 1: return nbhd::conj(rec(depth, sub / 2), rec(depth, sub - sub / 2));
    case 2: return nbhd::disj(rec(depth, sub / 2), rec(depth, sub - sub / 2));
    case 3: return nbhd::imp(rec(depth, sub / 2), rec(depth, sub - sub / 2));
    case 4: return nbhd::iff(rec(depth, sub / 2), rec(depth, sub - sub / 2));
    case 5: {
      Formula body = rec(depth - 1, sub);
      return nbhd::make_formula(modal[rng.below(modal.size())], {}, &body, nullptr);
    }
    default: return nbhd::announce(rec(depth - 1, sub / 2), rec(depth - 1, sub - sub / 2));
  }
}

/// Uniformly random model on n states (arbitrary neighborhoods).
inline NeighborhoodModel random_model(SplitMix64& rng, int n, const std::vector<std::string>& atoms) {
  NeighborhoodFrame frame = NeighborhoodFrame::with_default_names(n);
  nbhd::sample_unrestricted(rng, frame.nbhd());
  NeighborhoodModel m(std::move(frame));
  for (const auto& a : atoms) {
    m.set_valuation(a, nbhd::StateSet(n, static_cast<std::uint32_t>(rng.next()) &
                                            nbhd::StateSet::full_bits(n)));
  }
  return m;
}

/// Every model on n states over the given frame space and atoms.
template <typename Fn>
void for_each_model(const nbhd::FrameSpace& space, const std::vector<std::string>& atoms, Fn&& fn) {
  const int n = space.states();
  const std::uint32_t subsets = 1u << n;
  std::uint64_t vals = 1;
  for (std::size_t i = 0; i < atoms.size(); ++i) vals *= subsets;
  for (const auto& frame : space) {
    for (std::uint64_t v = 0; v < vals; ++v) {
      NeighborhoodModel m(frame);
      std::uint64_t rest = v;
      for (const auto& a : atoms) {
        m.set_valuation(a, nbhd::StateSet(n, static_cast<std::uint32_t>(rest % subsets)));
        rest /= subsets;
      }
      fn(m);
    }
  }
}

// Brute-force frame-property oracle over explicit set families.
using Family = std::set<std::set<int>>;

inline Family family_of(const NeighborhoodFrame& f, int s) {
  Family out;
  for (auto x : f.nbhd().family(s)) {
    std::set<int> members;
    for (int i = 0; i < f.size(); ++i) {
      if (x.contains(i)) members.insert(i);
    }
    out.insert(members);
  }
  return out;
}

inline std::vector<std::set<int>> all_subsets(int n) {
  std::vector<std::set<int>> out;
  for (int b = 0; b < (1 << n); ++b) {
    std::set<int> x;
    for (int i = 0; i < n; ++i) {
      if (b & (1 << i)) x.insert(i);
    }
    out.push_back(x);
  }
  return out;
}

inline bool includes(const std::set<int>& big, const std::set<int>& small) {
  for (int i : small) {
    if (!big.contains(i)) return false;
  }
  return true;
}

inline bool oracle_property(const NeighborhoodFrame& f, const std::string& p) {
  const int n = f.size();
  const auto subsets = all_subsets(n);
  std::set<int> universe;
  for (int i = 0; i < n; ++i) universe.insert(i);
  for (int s = 0; s < n; ++s) {
    Family fam = family_of(f, s);
    bool m = true, c = true;
    for (const auto& x : fam) {
      for (const auto& y : subsets) {
        if (includes(y, x) && !fam.contains(y)) m = false;
      }
      for (const auto& y : fam) {
        std::set<int> both;
        for (int i : x) {
          if (y.contains(i)) both.insert(i);
        }
        if (!fam.contains(both)) c = false;
      }
    }
    bool unit = fam.contains(universe);
    std::set<int> core = universe;
    for (const auto& x : fam) {
      std::set<int> next;
      for (int i : core) {
        if (x.contains(i)) next.insert(i);
      }
      core = next;
    }
    bool r = fam.contains(core);
    bool neg = true;
    for (const auto& x : fam) {
      for (const auto& y : subsets) {
        if (includes(y, x) && !y.contains(s) && !fam.contains(y)) neg = false;
      }
    }
    bool ok = p == "m" ? m : p == "c" ? c : p == "n" ? unit : p == "r" ? r
            : p == "filter" ? (m && c && unit) : neg;
    if (!ok) return false;
  }
  return true;
}

}  // namespace testing
