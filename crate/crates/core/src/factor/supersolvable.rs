use rayon::prelude::*;

use super::certificate::{one_based, Certificate, Property, Witness};
use super::nice::padded_exponents;
use super::partition::Partition;
use super::session::Session;
use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::lattice::{Flat, Lattice};

impl Session {
    pub fn is_supersolvable(&self, a: &Arrangement) -> Certificate {
        let lat = Lattice::build(a);
        let modular: Vec<bool> = if self.parallel() {
            self.install(|| lat.flats().par_iter().map(|x| lat.is_modular(x)).collect())
        } else {
            lat.flats().iter().map(|x| lat.is_modular(x)).collect()
        };
        let mut chain = vec![0];
        if extend_chain(&lat, &modular, &mut chain) {
            let flats = chain[1..].iter().map(|&i| one_based(lat.flats()[i].members())).collect();
            let sizes: Vec<usize> =
                chain.windows(2).map(|w| lat.flats()[w[1]].members().len() - lat.flats()[w[0]].members().len()).collect();
            Certificate::new(Property::Supersolvable, true, Witness::ModularChain { flats })
                .with_exponents(padded_exponents(a.dim(), &sizes))
        } else {
            Certificate::new(Property::Supersolvable, false, Witness::None)
        }
    }
}

fn extend_chain(lat: &Lattice, modular: &[bool], chain: &mut Vec<usize>) -> bool {
    let k = chain.len() - 1;
    if k == lat.rank() {
        return true;
    }
    let cur = &lat.flats()[*chain.last().unwrap()];
    for j in lat.level_range(k + 1) {
        if modular[j] && cur.is_below(&lat.flats()[j]) {
            chain.push(j);
            if extend_chain(lat, modular, chain) {
                return true;
            }
            chain.pop();
        }
    }
    false
}

/// Blocks 𝒜_{X_i} ∖ 𝒜_{X_{i-1}} of a maximal modular chain. The chain may
/// start at V or at the rank-one flat.
pub fn nice_from_modular_chain(a: &Arrangement, chain: &[Flat]) -> Result<Partition> {
    let lat = Lattice::build(a);
    let mut full: Vec<Flat> = Vec::with_capacity(chain.len() + 1);
    if chain.first().is_none_or(|x| x.rank() != 0) {
        full.push(Flat::whole());
    }
    full.extend(chain.iter().cloned());
    if full.len() != lat.rank() + 1 {
        return Err(Error::NotAModularChain(format!("expected {} flats above V, got {}", lat.rank(), full.len() - 1)));
    }
    for (k, x) in full.iter().enumerate() {
        x.validate(a)?;
        if x.rank() != k {
            return Err(Error::NotAModularChain(format!("flat {k} has rank {}", x.rank())));
        }
        if k > 0 && !full[k - 1].is_below(x) {
            return Err(Error::NotAModularChain(format!("flat {k} does not lie in flat {}", k - 1)));
        }
        if !lat.is_modular(x) {
            return Err(Error::NotAModularChain(format!("flat {k} is not modular")));
        }
    }
    Ok(Partition::new(
        full.windows(2)
            .map(|w| w[1].members().iter().filter(|m| !w[0].contains_hyperplane(**m)).copied().collect())
            .collect(),
    ))
}
