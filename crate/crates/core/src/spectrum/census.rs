use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::codes::{cyclic_lattice, CyclicCode};
use crate::error::{Error, Result};

use super::weights::{weight_distribution, WeightDistribution};

/// `G_j(D)`: the number of weight-`j` vectors `u` with `C(u) = D` exactly,
/// obtained by Moebius inversion over the subcodes of `D` in `lattice`.
pub fn generator_weight_census(d: &CyclicCode, lattice: &[CyclicCode], dim_limit: usize) -> Result<Vec<BigUint>> {
    check_lattice(d.n(), lattice)?;
    let idx = lattice
        .iter()
        .position(|c| c == d)
        .ok_or_else(|| Error::invalid("code is not in the lattice"))?;
    let spectra = lattice
        .iter()
        .map(|c| weight_distribution(c, dim_limit))
        .collect::<Result<Vec<_>>>()?;
    Ok(census_all(lattice, &spectra).swap_remove(idx))
}

/// Census for every member of a complete lattice at once, given spectra in
/// the same order.
pub fn census_all(lattice: &[CyclicCode], spectra: &[WeightDistribution]) -> Vec<Vec<BigUint>> {
    // Subcodes have larger redundancy, so process by increasing dimension.
    let mut order: Vec<usize> = (0..lattice.len()).collect();
    order.sort_by_key(|&i| lattice[i].dim());
    let mut out: Vec<Vec<BigUint>> = vec![Vec::new(); lattice.len()];
    for &i in &order {
        let mut g: Vec<BigUint> = spectra[i].counts().to_vec();
        for &j in &order {
            if j != i && lattice[j].is_subcode_of(&lattice[i]) && !out[j].is_empty() {
                for (x, y) in g.iter_mut().zip(&out[j]) {
                    *x -= y;
                }
            }
        }
        out[i] = g;
    }
    out
}

fn check_lattice(n: usize, lattice: &[CyclicCode]) -> Result<()> {
    let want: BTreeSet<_> = cyclic_lattice(n)?.into_iter().map(|c| c.generator().clone()).collect();
    let have: BTreeSet<_> = lattice
        .iter()
        .filter(|c| c.n() == n)
        .map(|c| c.generator().clone())
        .collect();
    if have != want || lattice.len() != want.len() {
        return Err(Error::invalid(format!(
            "lattice for n = {n} is incomplete or has duplicates ({} of {} codes)",
            have.len(),
            want.len()
        )));
    }
    Ok(())
}
