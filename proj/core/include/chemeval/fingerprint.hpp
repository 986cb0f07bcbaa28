// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_FINGERPRINT_HPP
#define CHEMEVAL_FINGERPRINT_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chemeval/smiles.hpp"

namespace chemeval {

struct FingerprintParams {
  int radius = 2;
  int width = 2048; // power of two, >= 64
};

struct Fingerprint {
  std::vector<std::uint64_t> words;
  int radius = 0;
  int width = 0;
  int n_set = 0;

  bool test(int bit) const {
    return (words[static_cast<std::size_t>(bit) / 64] >>
            (static_cast<std::size_t>(bit) % 64)) &
           1ULL;
  }
};

/// All circular-environment identifiers of the molecule for radii 0..radius:
/// one per (atom, radius), computed by iterated neighbor hashing.
std::vector<std::uint64_t> environment_ids(const Molecule &mol, int radius);

std::set<std::uint64_t> environment_id_set(const Molecule &mol, int radius);

/// ECFP-style circular fingerprint; identifiers folded modulo width.
Fingerprint fingerprint(const Molecule &mol, int radius, int width);
Fingerprint fingerprint(const Molecule &mol,
                        const FingerprintParams &params = {});

/// |A∩B| / |A∪B| over set bits; both empty -> 1.0.
double tanimoto(const Fingerprint &a, const Fingerprint &b);

/// Scores a predicted SMILES against the gold one. Unparsable prediction
/// scores 0.0; canonical identity scores exactly 1.0 regardless of
/// fingerprint fold collisions.
double similarity_of_smiles(const std::optional<std::string> &pred,
                            const std::string &gold,
                            const FingerprintParams &params = {});

} // namespace chemeval

#endif // CHEMEVAL_FINGERPRINT_HPP
