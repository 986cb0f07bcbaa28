// SPDX-License-Identifier: Apache-2.0

#include "chemeval/fingerprint.hpp"

#include <algorithm>
#include <bit>
#include <cstring>

namespace chemeval {

namespace {

void check_params(int radius, int width) {
  if (width < 64 || (width & (width - 1)) != 0) {
    throw InvalidParameter("fingerprint width must be a power of two >= 64");
  }
  if (radius < 0 || radius > 16) {
    throw InvalidParameter("fingerprint radius must be in [0, 16]");
  }
}

std::uint64_t combine(std::uint64_t own,
                      std::vector<std::pair<int, std::uint64_t>> neighbors) {
  std::sort(neighbors.begin(), neighbors.end());
  std::string buf;
  buf.resize(8 + neighbors.size() * 9);
  std::memcpy(buf.data(), &own, 8);
  std::size_t off = 8;
  for (const auto &[order, id] : neighbors) {
    buf[off++] = static_cast<char>(order);
    std::memcpy(buf.data() + off, &id, 8);
    off += 8;
  }
  return detail::fnv1a64(buf.data(), buf.size());
}

} // namespace

std::vector<std::uint64_t> environment_ids(const Molecule &mol, int radius) {
  const std::size_t n = mol.atoms.size();
  const auto adj = mol.adjacency();

  std::vector<std::uint64_t> current(n);
  for (std::size_t i = 0; i < n; ++i) {
    current[i] = detail::atom_invariant_hash(mol, static_cast<int>(i));
  }
  std::vector<std::uint64_t> ids = current;

  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::pair<int, std::uint64_t>> neighbors;
      neighbors.reserve(adj[i].size());
      for (int bi : adj[i]) {
        const Bond &b = mol.bonds[static_cast<std::size_t>(bi)];
        neighbors.emplace_back(
            static_cast<int>(b.order),
            current[static_cast<std::size_t>(b.other(static_cast<int>(i)))]);
      }
      next[i] = combine(current[i], std::move(neighbors));
    }
    current = std::move(next);
    ids.insert(ids.end(), current.begin(), current.end());
  }
  return ids;
}

std::set<std::uint64_t> environment_id_set(const Molecule &mol, int radius) {
  auto ids = environment_ids(mol, radius);
  return {ids.begin(), ids.end()};
}

Fingerprint fingerprint(const Molecule &mol, int radius, int width) {
  check_params(radius, width);
  Fingerprint fp;
  fp.radius = radius;
  fp.width = width;
  fp.words.assign(static_cast<std::size_t>(width) / 64, 0);
  for (std::uint64_t id : environment_ids(mol, radius)) {
    const std::uint64_t bit = id % static_cast<std::uint64_t>(width);
    fp.words[bit / 64] |= 1ULL << (bit % 64);
  }
  for (std::uint64_t w : fp.words) {
    fp.n_set += std::popcount(w);
  }
  return fp;
}

Fingerprint fingerprint(const Molecule &mol, const FingerprintParams &params) {
  return fingerprint(mol, params.radius, params.width);
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  if (a.width != b.width || a.radius != b.radius) {
    throw ParameterMismatch("fingerprint width/radius mismatch");
  }
  int inter = 0;
  int uni = 0;
  for (std::size_t i = 0; i < a.words.size(); ++i) {
    inter += std::popcount(a.words[i] & b.words[i]);
    uni += std::popcount(a.words[i] | b.words[i]);
  }
  if (uni == 0) {
    return 1.0; // two empty structures are identical
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double similarity_of_smiles(const std::optional<std::string> &pred,
                            const std::string &gold,
                            const FingerprintParams &params) {
  Molecule gold_mol;
  try {
    gold_mol = parse(gold);
  } catch (const InvalidSmiles &e) {
    throw GoldInvalid("gold SMILES does not parse: " + std::string(e.what()));
  }
  if (!pred) {
    return 0.0;
  }
  Molecule pred_mol;
  try {
    pred_mol = parse(*pred);
  } catch (const InvalidSmiles &) {
    return 0.0;
  }
  if (canonicalize(pred_mol) == canonicalize(gold_mol)) {
    return 1.0;
  }
  return tanimoto(fingerprint(pred_mol, params), fingerprint(gold_mol, params));
}

} // namespace chemeval
