// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_SMILES_HPP
#define CHEMEVAL_SMILES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chemeval/errors.hpp"

namespace chemeval {

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

/// Bond-order contribution used for implicit-H accounting (aromatic = 1.5).
double bond_order_value(BondOrder order);

struct Atom {
  std::string element;
  bool aromatic = false;
  int formal_charge = 0;
  std::optional<int> isotope;
  std::optional<int> explicit_h; // set for bracket atoms, including H0
  int implicit_h = 0;
  int index = 0;

  int total_h() const { return implicit_h + explicit_h.value_or(0); }
  bool is_bracket() const { return explicit_h.has_value(); }
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;

  int other(int atom) const { return atom == a ? b : a; }
};

struct Molecule {
  std::vector<Atom> atoms;
  std::vector<Bond> bonds;
  int components = 0;

  std::size_t size() const { return atoms.size(); }
  bool empty() const { return atoms.empty(); }

  /// Bond indices incident to each atom, in bond-list order.
  std::vector<std::vector<int>> adjacency() const;

  /// New molecule with atom i moved to position perm[i]; bonds relabeled.
  Molecule permuted(const std::vector<int> &perm) const;
};

struct ValidityVerdict {
  bool ok = false;
  std::string reason;
  std::size_t position = 0;

  explicit operator bool() const { return ok; }
};

/// Daylight organic subset + bracket atoms + rings + branches + dots.
/// Stereo markers (@ / \) are accepted and discarded.
Molecule parse(std::string_view smiles);

/// Serializes by DFS from atom 0 of each component. Re-parsing yields an
/// isomorphic graph with identical atom attributes and bond orders.
std::string write(const Molecule &mol);

/// Morgan-style iterative refinement ranks; a permutation of 0..n-1.
std::vector<int> canonical_ranks(const Molecule &mol);

/// Unique SMILES: rooted at the minimum-rank atom, neighbors visited in rank
/// order, component strings sorted. Invariant under atom renumbering and
/// idempotent.
std::string canonicalize(std::string_view smiles);
std::string canonicalize(const Molecule &mol);

/// Never throws; parse errors are reified into the verdict.
ValidityVerdict validate(std::string_view smiles) noexcept;

namespace detail {

std::uint64_t fnv1a64(const void *data, std::size_t len,
                      std::uint64_t seed = 14695981039346656037ULL);

/// Hash of the per-atom invariant tuple (element, aromatic, charge, isotope,
/// degree, total H). Shared between canonical ranking and fingerprints.
std::uint64_t atom_invariant_hash(const Molecule &mol, int atom_index);

bool is_organic_subset(const std::string &element);
int default_valence(const std::string &element); // -1 when not tabulated
bool known_element(const std::string &element);

} // namespace detail

} // namespace chemeval

#endif // CHEMEVAL_SMILES_HPP
