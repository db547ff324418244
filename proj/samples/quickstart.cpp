// Build a PSD block, construct the witness symmetry for |X + X*| and check
// the eigenvalue form against its sharp example.

#include "blockineq/blockineq.hpp"

#include <iostream>

using namespace blockineq;

int main() {
    // a random rank-3 block [[A, X], [X*, B]] of order 6
    const PsdBlock blk = sample_psd_block(3, 3, 2024);
    const FormPair fp = theorem_witness(blk, Diamond::plus);
    std::cout << "random block: agm margin " << fp.agm_form.margin << ", geo margin " << fp.geo_form.margin
              << ", witness defect " << fp.agm_form.witness_defect << "\n";

    // t = 1/2 is where the constant 1/4 is attained
    const ProbeResult p = probe_niceex(0.5, Diamond::plus);
    std::cout << "niceex t=1/2: ratio " << p.ratio << " against " << p.bound << "\n";

    // the same inequality for a Gram block built from two factor pairs
    Rng rng(7);
    const FactorList f({{ginibre(3, 3, rng), ginibre(3, 3, rng)}, {ginibre(3, 3, rng), ginibre(3, 3, rng)}});
    const AndoReports ando = ando_sum_bound(f);
    std::cout << "sum bound: geo margin " << ando.geo_form.margin << (ando.geo_form.pass ? " (pass)" : " (FAIL)")
              << "\n";

    // eigenvalues of both sides, as written in JSON reports
    std::cout << witness_to_json(fp.agm_form)["spectra"].dump() << "\n";
    return fp.agm_form.pass && fp.geo_form.pass && ando.geo_form.pass ? 0 : 1;
}
