// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_TESTS_CORPUS_HPP
#define CHEMEVAL_TESTS_CORPUS_HPP

#include <string>
#include <vector>

namespace chemeval::tests {

/// Valid SMILES, each at most 20 atoms; hand-picked structures plus
/// generated homologous series to pass the 200-molecule mark.
inline std::vector<std::string> corpus() {
  std::vector<std::string> smiles = {
      // alkanes, alcohols, amines, simple chains
      "CC", "CCC", "CCCC", "CC(C)C", "CC(C)(C)C", "CCO", "OCC", "C(O)C",
      "CCN", "CCCN", "NCCN", "OCCO", "CCOC", "COC", "CCOCC", "CC(O)C",
      "OCC(O)CO", "CCCCO", "CC(C)O", "CC(C)N", "CN(C)C", "CCNCC",
      "CCSCC", "CCS", "SCC", "CSC", "CS(=O)C", "CC#N", "CC=C", "C=C",
      "C#C", "CC#C", "C=CC=C", "C=C(C)C", "CC=O", "CC(=O)C", "CC(=O)O",
      "CC(=O)N", "CC(=O)OC", "CC(=O)OCC", "OC=O", "C(=O)O", "CC(=O)Cl",
      "FC(F)F", "FC(F)(F)F", "ClCCl", "ClC(Cl)Cl", "BrCCBr", "ICI",
      "CCF", "CCCl", "CCBr", "CCI", "ClCCO", "FCC(F)F",
      // rings
      "C1CC1", "C1CCC1", "C1CCCC1", "C1CCCCC1", "C1CCCCCC1", "C1CO1",
      "C1CN1", "C1CCOC1", "C1CCNC1", "C1CCSC1", "C1CCOCC1", "C1CCNCC1",
      "O1CCOCC1", "C1CC1C1CC1", "C1CC1CC1CC1", "C1CCC(C)CC1",
      "CC1CCCCC1", "CC1CCC(C)CC1", "OC1CCCCC1", "NC1CCCCC1",
      "C1CCC2(CC1)CCCC2", "C1CC2CCC1CC2", "C1CCC2CCCCC2C1",
      // aromatics
      "c1ccccc1", "Cc1ccccc1", "CCc1ccccc1", "Oc1ccccc1", "Nc1ccccc1",
      "Clc1ccccc1", "Fc1ccccc1", "Brc1ccccc1", "Cc1ccccc1C",
      "Cc1ccc(C)cc1", "Cc1cccc(C)c1", "Oc1ccc(O)cc1", "Nc1ccc(N)cc1",
      "Cc1ccc(O)cc1", "Oc1ccccc1O", "c1ccc2ccccc2c1", "Cc1ccc2ccccc2c1",
      "c1ccncc1", "c1ccoc1", "c1ccsc1", "c1cc[nH]c1", "c1cnc[nH]1",
      "c1ccc(cc1)c1ccccc1", "c1ccc(-c2ccccc2)cc1", "Cn1cccc1",
      "c1ccnc(N)c1", "Cc1ncccc1", "c1cnccn1", "c1ccc(C=O)cc1",
      "CC(=O)c1ccccc1", "OC(=O)c1ccccc1", "NC(=O)c1ccccc1",
      "COc1ccccc1", "CN(C)c1ccccc1", "CSc1ccccc1", "[nH]1cccc1",
      // bracket atoms: charges, isotopes, explicit H
      "[NH4+]", "[OH-]", "[CH3-]", "[CH4]", "[13CH4]", "[2H]O[2H]",
      "[Na+].[Cl-]", "[K+].[Br-]", "[O-]C(=O)C", "CC(=O)[O-]",
      "C[N+](C)(C)C", "[N+](C)(C)(C)C", "CC[NH3+]", "[O-][N+](=O)C",
      "C[S+](C)C", "[Se]1CCCC1", "[se]1cccc1", "[As](C)(C)C",
      "[SiH4]", "C[Si](C)(C)C", "O[Si](O)(O)O", "[Li+].[OH-]",
      "[Ca+2].[Cl-].[Cl-]", "[Fe]", "[Cu+2].[O-]C=O.[O-]C=O",
      "[12CH3]C", "[15NH3]", "[18OH2]", "[35Cl]C",
      // multi-component and dots
      "C.O", "C.C.C", "CCO.CCO", "c1ccccc1.c1ccccc1", "C.O.N",
      // stereo markers (accepted and discarded)
      "C[C@H](N)C(=O)O", "C[C@@H](O)C", "F/C=C/F", "F/C=C\\F",
      "O[C@H]1CCCC1", "C[C@](N)(O)C",
      // heavier functional groups
      "CN(C)C=O", "CC(C)CC(=O)O", "NCC(=O)O", "OCC(N)C(=O)O",
      "CC(N)C(=O)O", "CSCC(N)C(=O)O", "OS(=O)(=O)O", "COS(=O)(=O)OC",
      "OP(=O)(O)O", "COP(=O)(O)OC", "N#CC#N", "O=C=O", "S=C=S",
      "CN=C=O", "CC(=O)OC(=O)C", "CC(=O)NC", "CNC(=O)NC",
      "O=[N+]([O-])c1ccccc1", "CC(=O)Nc1ccccc1", "CCOC(=O)C",
      "O=C1CCCCC1", "O=C1CCCC1", "O=C1CCCN1", "CC1=CC(=O)CC(C)(C)C1",
      "C1=CC=CC=C1", "C1=CC2=CC=CC=C2C=C1", "C1=CC(=O)C=CC1=O",
      // the wildcard atom
      "*C", "C*C", "*c1ccccc1",
  };
  // homologous series: alkanes, alcohols, nitriles up to 18 heavy atoms
  for (int n = 5; n <= 18; ++n) {
    smiles.push_back(std::string(static_cast<std::size_t>(n), 'C'));
    smiles.push_back(std::string(static_cast<std::size_t>(n - 1), 'C') + "O");
    smiles.push_back(std::string(static_cast<std::size_t>(n - 2), 'C') +
                     "C#N");
  }
  // methyl-substituted cyclohexanes
  for (int n = 1; n <= 4; ++n) {
    std::string s = "C1CCCCC1";
    for (int k = 0; k < n; ++k) {
      s = "C" + s;
    }
    smiles.push_back(s);
  }
  return smiles;
}

} // namespace chemeval::tests

#endif
