// SPDX-License-Identifier: Apache-2.0

#include "chemeval/smiles.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace chemeval {

double bond_order_value(BondOrder order) {
  switch (order) {
  case BondOrder::Single:
    return 1.0;
  case BondOrder::Double:
    return 2.0;
  case BondOrder::Triple:
    return 3.0;
  case BondOrder::Aromatic:
    return 1.5;
  }
  return 1.0;
}

std::vector<std::vector<int>> Molecule::adjacency() const {
  std::vector<std::vector<int>> adj(atoms.size());
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    adj[static_cast<std::size_t>(bonds[i].a)].push_back(static_cast<int>(i));
    adj[static_cast<std::size_t>(bonds[i].b)].push_back(static_cast<int>(i));
  }
  return adj;
}

Molecule Molecule::permuted(const std::vector<int> &perm) const {
  Molecule out;
  out.atoms.resize(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    Atom a = atoms[i];
    a.index = perm[i];
    out.atoms[static_cast<std::size_t>(perm[i])] = std::move(a);
  }
  out.bonds.reserve(bonds.size());
  for (const Bond &b : bonds) {
    out.bonds.push_back(Bond{perm[static_cast<std::size_t>(b.a)],
                             perm[static_cast<std::size_t>(b.b)], b.order});
  }
  out.components = components;
  return out;
}

namespace detail {

std::uint64_t fnv1a64(const void *data, std::size_t len, std::uint64_t seed) {
  const auto *p = static_cast<const unsigned char *>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

const std::set<std::string> &element_table() {
  static const std::set<std::string> table = {
      "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
      "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
      "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
      "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
      "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
      "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
      "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
      "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm",
      "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs",
      "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og", "*"};
  return table;
}

// Elements that may carry the aromatic flag.
const std::set<std::string> &aromatic_capable() {
  static const std::set<std::string> table = {"B", "C",  "N",  "O",
                                              "P", "S",  "Se", "As"};
  return table;
}

struct ValenceEntry {
  int normal;  // default valence for implicit-H computation
  int maximum; // hard cap on explicit bond-order sum
};

const std::map<std::string, ValenceEntry> &valence_table() {
  // Maxima admit the common hypervalent forms written without charges
  // (nitro N, sulfate S, phosphate P, perhalates).
  static const std::map<std::string, ValenceEntry> table = {
      {"B", {3, 3}},  {"C", {4, 4}},  {"N", {3, 5}}, {"O", {2, 3}},
      {"P", {3, 6}},  {"S", {2, 6}},  {"F", {1, 1}}, {"Cl", {1, 7}},
      {"Br", {1, 7}}, {"I", {1, 7}},
  };
  return table;
}

} // namespace

bool is_organic_subset(const std::string &element) {
  return valence_table().count(element) != 0;
}

int default_valence(const std::string &element) {
  auto it = valence_table().find(element);
  return it == valence_table().end() ? -1 : it->second.normal;
}

bool known_element(const std::string &element) {
  return element_table().count(element) != 0;
}

std::uint64_t atom_invariant_hash(const Molecule &mol, int atom_index) {
  const Atom &atom = mol.atoms[static_cast<std::size_t>(atom_index)];
  int degree = 0;
  for (const Bond &b : mol.bonds) {
    if (b.a == atom_index || b.b == atom_index) {
      ++degree;
    }
  }
  std::string buf;
  buf += atom.element;
  buf += '|';
  buf += atom.aromatic ? '1' : '0';
  buf += '|';
  buf += std::to_string(atom.formal_charge);
  buf += '|';
  buf += std::to_string(atom.isotope.value_or(-1));
  buf += '|';
  buf += std::to_string(degree);
  buf += '|';
  buf += std::to_string(atom.total_h());
  return fnv1a64(buf.data(), buf.size());
}

} // namespace detail

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct RingOpening {
  int atom = 0;
  std::optional<BondOrder> order;
  std::size_t position = 0;
};

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Molecule run() {
    if (text_.empty()) {
      throw InvalidSmiles(0, "empty input");
    }
    while (pos_ < text_.size()) {
      step();
    }
    if (!open_branches_.empty()) {
      throw InvalidSmiles(open_branches_.back(), "unmatched '('");
    }
    if (!open_rings_.empty()) {
      throw InvalidSmiles(open_rings_.begin()->second.position,
                          "unmatched ring closure " +
                              std::to_string(open_rings_.begin()->first));
    }
    if (mol_.atoms.empty()) {
      throw InvalidSmiles(0, "no atoms");
    }
    finalize();
    return std::move(mol_);
  }

private:
  void step() {
    const char c = text_[pos_];
    switch (c) {
    case '(':
      if (prev_atom_ < 0) {
        throw InvalidSmiles(pos_, "branch before any atom");
      }
      if (pending_order_) {
        throw InvalidSmiles(pos_, "dangling bond symbol before '('");
      }
      open_branches_.push_back(pos_);
      branch_stack_.push_back(prev_atom_);
      ++pos_;
      return;
    case ')':
      if (branch_stack_.empty()) {
        throw InvalidSmiles(pos_, "unmatched ')'");
      }
      if (pending_order_) {
        throw InvalidSmiles(pos_, "dangling bond symbol before ')'");
      }
      prev_atom_ = branch_stack_.back();
      branch_stack_.pop_back();
      open_branches_.pop_back();
      ++pos_;
      return;
    case '.':
      if (pending_order_) {
        throw InvalidSmiles(pos_, "bond symbol before '.'");
      }
      if (!branch_stack_.empty()) {
        throw InvalidSmiles(pos_, "'.' inside a branch");
      }
      prev_atom_ = -1;
      ++pos_;
      return;
    case '-':
      take_bond(BondOrder::Single);
      return;
    case '=':
      take_bond(BondOrder::Double);
      return;
    case '#':
      take_bond(BondOrder::Triple);
      return;
    case ':':
      take_bond(BondOrder::Aromatic);
      return;
    case '/':
    case '\\':
      // Stereo bond direction: treated as a plain single bond.
      take_bond(BondOrder::Single);
      return;
    case '%': {
      std::size_t start = pos_;
      ++pos_;
      if (pos_ + 1 >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        throw InvalidSmiles(start, "'%' must be followed by two digits");
      }
      int number = (text_[pos_] - '0') * 10 + (text_[pos_ + 1] - '0');
      pos_ += 2;
      ring_closure(number, start);
      return;
    }
    case '[':
      bracket_atom();
      return;
    default:
      break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      ++pos_;
      ring_closure(c - '0', start);
      return;
    }
    bare_atom();
  }

  void take_bond(BondOrder order) {
    if (prev_atom_ < 0) {
      throw InvalidSmiles(pos_, "bond symbol before any atom");
    }
    if (pending_order_) {
      throw InvalidSmiles(pos_, "two consecutive bond symbols");
    }
    pending_order_ = order;
    ++pos_;
  }

  void bare_atom() {
    std::size_t start = pos_;
    Atom atom;
    // Two-letter organic-subset symbols first.
    if (text_.compare(pos_, 2, "Cl") == 0) {
      atom.element = "Cl";
      pos_ += 2;
    } else if (text_.compare(pos_, 2, "Br") == 0) {
      atom.element = "Br";
      pos_ += 2;
    } else {
      const char c = text_[pos_];
      static const std::string upper = "BCNOPSFI";
      static const std::string lower = "bcnops";
      if (c == '*') {
        atom.element = "*";
      } else if (upper.find(c) != std::string::npos) {
        atom.element = std::string(1, c);
      } else if (lower.find(c) != std::string::npos) {
        atom.element = std::string(1, static_cast<char>(std::toupper(
                                          static_cast<unsigned char>(c))));
        atom.aromatic = true;
      } else {
        throw InvalidSmiles(pos_, std::string("unexpected character '") + c +
                                      "'");
      }
      ++pos_;
    }
    add_atom(std::move(atom), start);
  }

  void bracket_atom() {
    const std::size_t start = pos_;
    ++pos_; // consume '['
    Atom atom;
    atom.explicit_h = 0;

    // isotope
    if (pos_ < text_.size() &&
        std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      int iso = 0;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        iso = iso * 10 + (text_[pos_] - '0');
        ++pos_;
      }
      atom.isotope = iso;
    }

    // element symbol
    if (pos_ >= text_.size()) {
      throw InvalidSmiles(start, "unterminated bracket atom");
    }
    if (text_[pos_] == '*') {
      atom.element = "*";
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(text_[pos_]))) {
      std::string sym(1, text_[pos_]);
      ++pos_;
      if (pos_ < text_.size() &&
          std::islower(static_cast<unsigned char>(text_[pos_])) &&
          detail::known_element(sym + text_[pos_])) {
        sym += text_[pos_];
        ++pos_;
      }
      if (!detail::known_element(sym)) {
        throw InvalidSmiles(start, "unknown element '" + sym + "'");
      }
      atom.element = sym;
    } else if (std::islower(static_cast<unsigned char>(text_[pos_]))) {
      std::string sym(1, text_[pos_]);
      ++pos_;
      if (pos_ < text_.size() &&
          std::islower(static_cast<unsigned char>(text_[pos_]))) {
        std::string two = sym + text_[pos_];
        if (two == "se" || two == "as") {
          sym = two;
          ++pos_;
        }
      }
      std::string upper = sym;
      upper[0] = static_cast<char>(
          std::toupper(static_cast<unsigned char>(upper[0])));
      if (!detail::aromatic_capable().count(upper)) {
        throw InvalidSmiles(start, "element '" + sym + "' cannot be aromatic");
      }
      atom.element = upper;
      atom.aromatic = true;
    } else {
      throw InvalidSmiles(pos_, "malformed bracket atom");
    }

    // chirality: accepted and discarded
    while (pos_ < text_.size() && text_[pos_] == '@') {
      ++pos_;
      // named chirality classes like @TH1, @AL2
      if (pos_ + 2 < text_.size() &&
          std::isupper(static_cast<unsigned char>(text_[pos_])) &&
          std::isupper(static_cast<unsigned char>(text_[pos_ + 1])) &&
          std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
        pos_ += 3;
      }
    }

    // hydrogen count
    if (pos_ < text_.size() && text_[pos_] == 'H') {
      ++pos_;
      int count = 1;
      if (pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        count = 0;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          count = count * 10 + (text_[pos_] - '0');
          ++pos_;
        }
      }
      atom.explicit_h = count;
    }

    // charge
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const char sign = text_[pos_];
      int magnitude = 0;
      while (pos_ < text_.size() && text_[pos_] == sign) {
        ++magnitude;
        ++pos_;
      }
      if (magnitude == 1 && pos_ < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        magnitude = 0;
        while (pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          magnitude = magnitude * 10 + (text_[pos_] - '0');
          ++pos_;
        }
      }
      atom.formal_charge = sign == '+' ? magnitude : -magnitude;
    }

    // atom class: accepted and discarded
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      if (pos_ >= text_.size() ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        throw InvalidSmiles(pos_, "malformed atom class");
      }
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      }
    }

    if (pos_ >= text_.size() || text_[pos_] != ']') {
      throw InvalidSmiles(start, "malformed bracket atom (missing ']')");
    }
    ++pos_;
    add_atom(std::move(atom), start);
  }

  void add_atom(Atom atom, std::size_t position) {
    atom.index = static_cast<int>(mol_.atoms.size());
    const int idx = atom.index;
    mol_.atoms.push_back(std::move(atom));
    if (prev_atom_ >= 0) {
      add_bond(prev_atom_, idx, pending_order_, position);
    } else if (pending_order_) {
      throw InvalidSmiles(position, "bond symbol with no preceding atom");
    }
    pending_order_.reset();
    prev_atom_ = idx;
  }

  void ring_closure(int number, std::size_t position) {
    if (prev_atom_ < 0) {
      throw InvalidSmiles(position, "ring closure before any atom");
    }
    auto it = open_rings_.find(number);
    if (it == open_rings_.end()) {
      open_rings_[number] = RingOpening{prev_atom_, pending_order_, position};
      pending_order_.reset();
      return;
    }
    RingOpening opening = it->second;
    open_rings_.erase(it);
    std::optional<BondOrder> order = opening.order;
    if (pending_order_) {
      if (order && *order != *pending_order_) {
        throw InvalidSmiles(position, "conflicting ring-bond orders");
      }
      order = pending_order_;
    }
    pending_order_.reset();
    add_bond(opening.atom, prev_atom_, order, position);
  }

  void add_bond(int a, int b, std::optional<BondOrder> order,
                std::size_t position) {
    if (a == b) {
      throw InvalidSmiles(position, "bond from an atom to itself");
    }
    for (const Bond &bond : mol_.bonds) {
      if ((bond.a == a && bond.b == b) || (bond.a == b && bond.b == a)) {
        throw InvalidSmiles(position, "duplicate bond between atoms");
      }
    }
    const Atom &atom_a = mol_.atoms[static_cast<std::size_t>(a)];
    const Atom &atom_b = mol_.atoms[static_cast<std::size_t>(b)];
    BondOrder resolved;
    if (order) {
      resolved = *order;
      if (resolved == BondOrder::Aromatic &&
          !(atom_a.aromatic && atom_b.aromatic)) {
        throw InvalidSmiles(position,
                            "aromatic bond between non-aromatic atoms");
      }
    } else {
      resolved = (atom_a.aromatic && atom_b.aromatic) ? BondOrder::Aromatic
                                                      : BondOrder::Single;
    }
    mol_.bonds.push_back(Bond{a, b, resolved});
  }

  void finalize() {
    std::vector<double> order_sum(mol_.atoms.size(), 0.0);
    // For the valence cap, an aromatic bond counts as 1 so that fused ring
    // atoms (three aromatic bonds) stay legal.
    std::vector<int> cap_sum(mol_.atoms.size(), 0);
    for (const Bond &b : mol_.bonds) {
      order_sum[static_cast<std::size_t>(b.a)] += bond_order_value(b.order);
      order_sum[static_cast<std::size_t>(b.b)] += bond_order_value(b.order);
      const int unit = b.order == BondOrder::Aromatic
                           ? 1
                           : static_cast<int>(bond_order_value(b.order));
      cap_sum[static_cast<std::size_t>(b.a)] += unit;
      cap_sum[static_cast<std::size_t>(b.b)] += unit;
    }
    for (std::size_t i = 0; i < mol_.atoms.size(); ++i) {
      Atom &atom = mol_.atoms[i];
      const int explicit_sum = static_cast<int>(std::ceil(order_sum[i]));
      auto it = detail::valence_table().find(atom.element);
      if (it != detail::valence_table().end() &&
          cap_sum[i] > it->second.maximum) {
        throw InvalidSmiles(
            0, "valence " + std::to_string(cap_sum[i]) + " on " +
                   atom.element + " exceeds maximum " +
                   std::to_string(it->second.maximum));
      }
      if (!atom.is_bracket() && atom.element != "*" &&
          it != detail::valence_table().end()) {
        atom.implicit_h = std::max(0, it->second.normal - explicit_sum);
      } else {
        atom.implicit_h = 0;
      }
    }
    mol_.components = count_components();
  }

  int count_components() const {
    std::vector<int> parent(mol_.atoms.size());
    for (std::size_t i = 0; i < parent.size(); ++i) {
      parent[i] = static_cast<int>(i);
    }
    std::function<int(int)> find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        x = parent[static_cast<std::size_t>(x)] =
            parent[static_cast<std::size_t>(
                parent[static_cast<std::size_t>(x)])];
      }
      return x;
    };
    for (const Bond &b : mol_.bonds) {
      parent[static_cast<std::size_t>(find(b.a))] = find(b.b);
    }
    std::set<int> roots;
    for (std::size_t i = 0; i < parent.size(); ++i) {
      roots.insert(find(static_cast<int>(i)));
    }
    return static_cast<int>(roots.size());
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Molecule mol_;
  int prev_atom_ = -1;
  std::optional<BondOrder> pending_order_;
  std::vector<int> branch_stack_;
  std::vector<std::size_t> open_branches_;
  std::map<int, RingOpening> open_rings_;
};

} // namespace

Molecule parse(std::string_view smiles) { return Parser(smiles).run(); }

ValidityVerdict validate(std::string_view smiles) noexcept {
  try {
    parse(smiles);
    return ValidityVerdict{true, "", 0};
  } catch (const InvalidSmiles &e) {
    return ValidityVerdict{false, e.reason(), e.position()};
  } catch (const std::exception &e) {
    return ValidityVerdict{false, e.what(), 0};
  }
}

// ---------------------------------------------------------------------------
// Writer
// ---------------------------------------------------------------------------

namespace {

// Hydrogens a bare (bracket-free) atom would pick up when the token is read
// back; -1 when the element cannot be written bare at all.
int bare_reparse_h(const Molecule &mol, const Atom &atom) {
  if (!detail::is_organic_subset(atom.element)) {
    return -1;
  }
  double order_sum = 0.0;
  for (const Bond &b : mol.bonds) {
    if (b.a == atom.index || b.b == atom.index) {
      order_sum += bond_order_value(b.order);
    }
  }
  return std::max(0, detail::default_valence(atom.element) -
                         static_cast<int>(std::ceil(order_sum)));
}

std::string atom_token(const Molecule &mol, const Atom &atom) {
  const bool needs_bracket =
      atom.formal_charge != 0 || atom.isotope ||
      !detail::is_organic_subset(atom.element) ||
      (atom.aromatic && (atom.element == "Se" || atom.element == "As")) ||
      atom.total_h() != bare_reparse_h(mol, atom);
  std::string sym = atom.element;
  if (atom.aromatic) {
    for (char &c : sym) {
      c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  if (!needs_bracket) {
    return sym;
  }
  std::string out = "[";
  if (atom.isotope) {
    out += std::to_string(*atom.isotope);
  }
  out += sym;
  const int h = atom.total_h();
  if (h == 1) {
    out += 'H';
  } else if (h > 1) {
    out += 'H' + std::to_string(h);
  }
  if (atom.formal_charge == 1) {
    out += '+';
  } else if (atom.formal_charge == -1) {
    out += '-';
  } else if (atom.formal_charge > 1) {
    out += '+' + std::to_string(atom.formal_charge);
  } else if (atom.formal_charge < -1) {
    out += '-' + std::to_string(-atom.formal_charge);
  }
  out += ']';
  return out;
}

std::string bond_token(const Molecule &mol, const Bond &bond) {
  switch (bond.order) {
  case BondOrder::Double:
    return "=";
  case BondOrder::Triple:
    return "#";
  case BondOrder::Aromatic:
    return ""; // default between two aromatic atoms
  case BondOrder::Single: {
    const Atom &a = mol.atoms[static_cast<std::size_t>(bond.a)];
    const Atom &b = mol.atoms[static_cast<std::size_t>(bond.b)];
    // explicit '-' so the default does not read back as aromatic
    return (a.aromatic && b.aromatic) ? "-" : "";
  }
  }
  return "";
}

class Writer {
public:
  Writer(const Molecule &mol, std::vector<int> keys)
      : mol_(mol), keys_(std::move(keys)), adj_(mol.adjacency()),
        visited_(mol.atoms.size(), false) {}

  /// One SMILES string per connected component, rooted at the min-key atom,
  /// neighbors visited in key order.
  std::vector<std::string> components() {
    std::vector<std::string> out;
    std::vector<int> order(mol_.atoms.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      order[i] = static_cast<int>(i);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return keys_[static_cast<std::size_t>(a)] <
             keys_[static_cast<std::size_t>(b)];
    });
    for (int root : order) {
      if (visited_[static_cast<std::size_t>(root)]) {
        continue;
      }
      find_ring_bonds(root);
      std::string s;
      emit(root, -1, s);
      out.push_back(std::move(s));
    }
    return out;
  }

private:
  // DFS pre-pass marking back edges; emission uses the same child order.
  void find_ring_bonds(int root) {
    std::vector<bool> seen(mol_.atoms.size(), false);
    std::function<void(int, int)> dfs = [&](int atom, int via_bond) {
      seen[static_cast<std::size_t>(atom)] = true;
      for (int bi : sorted_bonds(atom)) {
        if (bi == via_bond || ring_bond_.count(bi)) {
          continue;
        }
        int next = mol_.bonds[static_cast<std::size_t>(bi)].other(atom);
        if (seen[static_cast<std::size_t>(next)]) {
          ring_bond_[bi] = 0; // number assigned at emission time
        } else {
          dfs(next, bi);
        }
      }
    };
    dfs(root, -1);
  }

  std::vector<int> sorted_bonds(int atom) const {
    std::vector<int> bonds = adj_[static_cast<std::size_t>(atom)];
    std::sort(bonds.begin(), bonds.end(), [&](int x, int y) {
      int nx = mol_.bonds[static_cast<std::size_t>(x)].other(atom);
      int ny = mol_.bonds[static_cast<std::size_t>(y)].other(atom);
      return keys_[static_cast<std::size_t>(nx)] <
             keys_[static_cast<std::size_t>(ny)];
    });
    return bonds;
  }

  int allocate_ring_number() {
    for (int n = 1;; ++n) {
      if (!in_use_.count(n)) {
        in_use_.insert(n);
        return n;
      }
    }
  }

  std::string ring_digit(int n) const {
    return n < 10 ? std::to_string(n) : "%" + std::to_string(n);
  }

  void emit(int atom, int via_bond, std::string &out) {
    visited_[static_cast<std::size_t>(atom)] = true;
    out += atom_token(mol_, mol_.atoms[static_cast<std::size_t>(atom)]);

    std::vector<int> tree_children;
    for (int bi : sorted_bonds(atom)) {
      if (bi == via_bond) {
        continue;
      }
      const Bond &bond = mol_.bonds[static_cast<std::size_t>(bi)];
      auto rit = ring_bond_.find(bi);
      if (rit != ring_bond_.end()) {
        if (rit->second == 0) {
          int n = allocate_ring_number();
          rit->second = n;
          out += bond_token(mol_, bond);
          out += ring_digit(n);
        } else {
          int n = rit->second;
          in_use_.erase(n);
          out += ring_digit(n);
        }
        continue;
      }
      int next = bond.other(atom);
      if (!visited_[static_cast<std::size_t>(next)]) {
        tree_children.push_back(bi);
      }
    }

    for (std::size_t i = 0; i < tree_children.size(); ++i) {
      const int bi = tree_children[i];
      const Bond &bond = mol_.bonds[static_cast<std::size_t>(bi)];
      const bool last = i + 1 == tree_children.size();
      if (!last) {
        out += '(';
      }
      out += bond_token(mol_, bond);
      emit(bond.other(atom), bi, out);
      if (!last) {
        out += ')';
      }
    }
  }

  const Molecule &mol_;
  std::vector<int> keys_;
  std::vector<std::vector<int>> adj_;
  std::vector<bool> visited_;
  std::map<int, int> ring_bond_; // bond index -> ring number (0 = unassigned)
  std::set<int> in_use_;
};

std::string join(const std::vector<std::string> &parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) {
      out += '.';
    }
    out += parts[i];
  }
  return out;
}

} // namespace

std::string write(const Molecule &mol) {
  if (mol.empty()) {
    return "";
  }
  std::vector<int> keys(mol.atoms.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    keys[i] = static_cast<int>(i);
  }
  return join(Writer(mol, std::move(keys)).components());
}

// ---------------------------------------------------------------------------
// Canonical ranks
// ---------------------------------------------------------------------------

namespace {

// Rank-compress 64-bit labels: distinct values sorted ascending -> 0..k-1.
std::vector<int> compress(const std::vector<std::uint64_t> &labels) {
  std::vector<std::uint64_t> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> ranks(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ranks[i] = static_cast<int>(
        std::lower_bound(sorted.begin(), sorted.end(), labels[i]) -
        sorted.begin());
  }
  return ranks;
}

int distinct_count(const std::vector<int> &ranks) {
  std::set<int> s(ranks.begin(), ranks.end());
  return static_cast<int>(s.size());
}

std::vector<int> refine(const Molecule &mol, std::vector<int> ranks) {
  const auto adj = mol.adjacency();
  const std::size_t n = mol.atoms.size();
  int distinct = distinct_count(ranks);
  for (std::size_t iter = 0; iter <= n; ++iter) {
    std::vector<std::uint64_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::pair<int, int>> nbrs; // (order code, neighbor rank)
      for (int bi : adj[i]) {
        const Bond &b = mol.bonds[static_cast<std::size_t>(bi)];
        nbrs.emplace_back(static_cast<int>(b.order),
                          ranks[static_cast<std::size_t>(
                              b.other(static_cast<int>(i)))]);
      }
      std::sort(nbrs.begin(), nbrs.end());
      std::string buf = std::to_string(ranks[i]);
      for (auto [order, rank] : nbrs) {
        buf += ';';
        buf += std::to_string(order);
        buf += ',';
        buf += std::to_string(rank);
      }
      labels[i] = detail::fnv1a64(buf.data(), buf.size());
    }
    std::vector<int> next = compress(labels);
    int next_distinct = distinct_count(next);
    if (next_distinct == distinct && next == ranks) {
      break;
    }
    // Refinement must not merge classes; restart comparison from new ranks.
    ranks = std::move(next);
    distinct = next_distinct;
  }
  return ranks;
}

} // namespace

std::vector<int> canonical_ranks(const Molecule &mol) {
  const std::size_t n = mol.atoms.size();
  std::vector<std::uint64_t> init(n);
  for (std::size_t i = 0; i < n; ++i) {
    init[i] = detail::atom_invariant_hash(mol, static_cast<int>(i));
  }
  std::vector<int> ranks = refine(mol, compress(init));

  while (distinct_count(ranks) < static_cast<int>(n)) {
    // Double all ranks, then split the lowest tied class by decrementing one
    // of its members.
    for (int &r : ranks) {
      r *= 2;
    }
    int tied_rank = -1;
    std::map<int, int> counts;
    for (int r : ranks) {
      ++counts[r];
    }
    for (auto [rank, count] : counts) {
      if (count > 1) {
        tied_rank = rank;
        break;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (ranks[i] == tied_rank) {
        --ranks[i];
        break;
      }
    }
    std::vector<std::uint64_t> as_labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      as_labels[i] = static_cast<std::uint64_t>(ranks[i]);
    }
    ranks = refine(mol, compress(as_labels));
  }
  return ranks;
}

std::string canonicalize(const Molecule &mol) {
  if (mol.empty()) {
    return "";
  }
  std::vector<int> ranks = canonical_ranks(mol);
  std::vector<std::string> parts = Writer(mol, std::move(ranks)).components();
  std::sort(parts.begin(), parts.end());
  return join(parts);
}

std::string canonicalize(std::string_view smiles) {
  return canonicalize(parse(smiles));
}

} // namespace chemeval
