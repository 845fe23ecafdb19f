//! Independent re-checking of certificates. A certificate verifies when its
//! witness substantiates its verdict; verdicts resting on exhaustive search
//! are re-derived.

use super::certificate::{zero_based, Certificate, Property, Witness};
use super::inductive::extra_element;
use super::nice::{padded_exponents, restriction_map};
use super::partition::Partition;
use super::session::Session;
use super::supersolvable::nice_from_modular_chain;
use crate::arrangement::Arrangement;
use crate::error::Result;
use crate::lattice::{try_factor_linear, Flat, Lattice};
use crate::linalg::rank;

impl Session {
    pub fn verify(&self, a: &Arrangement, cert: &Certificate) -> Result<bool> {
        use Property::*;
        let part = cert.partition.as_ref();
        Ok(match (cert.property, cert.verdict, &cert.witness) {
            (Independent | Nice, false, Witness::DependentTransversal { hyperplanes }) => match part {
                Some(p) => self.dependent_transversal_ok(a, p, hyperplanes),
                None => false,
            },
            (Independent, true, _) => part.is_some_and(|p| self.is_independent(a, p).is_ok_and(|c| c.verdict)),
            (Nice, true, Witness::Partition { partition }) => {
                part.is_none_or(|p| p == partition) && self.is_nice(a, partition)?.verdict
            }
            (Nice, false, Witness::NoSingleton { flat, induced }) => match part {
                Some(p) => no_singleton_ok(a, p, flat, induced),
                None => false,
            },
            (Factored, true, Witness::Partition { partition }) => self.is_nice(a, partition)?.verdict,
            (Factored, false, Witness::PoincareNotFactored { poincare }) => {
                let pi = Lattice::build(a).poincare();
                pi == *poincare && try_factor_linear(&pi).is_none()
            }
            (Factored, false, Witness::None) => !self.is_factored(a)?.verdict,
            (InductivelyFree, true, Witness::InductionOrder { order }) => match zero_based(order) {
                Some(order) => self.if_order_ok(a, &order, cert.exponents.as_deref()),
                None => false,
            },
            (InductivelyFree, false, Witness::None) => !self.is_inductively_free(a).verdict,
            (InductiveFactorization | InductivelyFactored, true, Witness::Factorization { partition, order }) => {
                part.is_none_or(|p| p == partition)
                    && match zero_based(order) {
                        Some(order) => self.factorization_order_ok(a, partition, &order)?,
                        None => false,
                    }
            }
            (InductiveFactorization, false, Witness::ExponentMismatch { exponents, block_sizes }) => {
                let sizes_ok = part.is_some_and(|p| p.sizes() == *block_sizes);
                let mine = padded_exponents(a.dim(), block_sizes);
                sizes_ok
                    && self.inductive_exponents(a).as_ref() == Some(exponents)
                    && (mine != *exponents || block_sizes.len() != a.rank())
            }
            (InductiveFactorization, false, Witness::None) => match part {
                Some(p) => !self.is_inductive_factorization(a, p)?.verdict,
                None => false,
            },
            (InductivelyFactored, false, Witness::None) => !self.is_inductively_factored(a)?.verdict,
            (Supersolvable, true, Witness::ModularChain { flats }) => chain_ok(a, flats),
            (Supersolvable, false, Witness::None) => !self.is_supersolvable(a).verdict,
            (HereditarilyFactored | HereditarilyInductivelyFactored | HereditarilyInductivelyFree, false, Witness::FailingRestriction { flat, certificate }) => {
                let Some(members) = zero_based(flat) else {
                    return Ok(false);
                };
                let Ok(x) = Flat::from_hyperplanes(a, &members) else {
                    return Ok(false);
                };
                x.members() == members.as_slice() && !certificate.verdict && self.verify(&a.restrict(&x)?, certificate)?
            }
            (HereditarilyFactored, true, _) => self.hereditary_check(a, super::Hereditary::Factored)?.verdict,
            (HereditarilyInductivelyFactored, true, _) => {
                self.hereditary_check(a, super::Hereditary::InductivelyFactored)?.verdict
            }
            (HereditarilyInductivelyFree, true, _) => self.hereditary_check(a, super::Hereditary::InductivelyFree)?.verdict,
            (KappaIsomorphism, _, _) => match part {
                Some(p) => self.kappa_is_isomorphism(a, p)? == *cert,
                None => false,
            },
            _ => false,
        })
    }

    fn dependent_transversal_ok(&self, a: &Arrangement, p: &Partition, hyperplanes: &[usize]) -> bool {
        let Some(t) = zero_based(hyperplanes) else {
            return false;
        };
        if p.validate(a.len()).is_err() || t.len() != p.len() || t.iter().any(|&h| h >= a.len()) {
            return false;
        }
        let one_each = t.iter().enumerate().all(|(k, &h)| p.block_of(h) == Some(k));
        one_each && rank(t.iter().map(|&h| a.normal(h).to_vec()).collect()) < t.len()
    }

    fn if_order_ok(&self, a: &Arrangement, order: &[usize], claimed: Option<&[usize]>) -> bool {
        if !is_permutation(order, a.len()) {
            return false;
        }
        let mut exps = vec![0; a.dim()];
        for i in 1..=order.len() {
            let ai = a.subarrangement(&order[..i]);
            let t = ai.triple(i - 1).expect("nonempty");
            let Some(e2) = self.inductive_exponents(&t.restricted) else {
                return false;
            };
            let Some(b) = extra_element(&exps, &e2) else {
                return false;
            };
            exps = e2;
            exps.push(b + 1);
            exps.sort_unstable();
        }
        claimed.is_none_or(|c| c == exps)
    }

    fn factorization_order_ok(&self, a: &Arrangement, p: &Partition, order: &[usize]) -> Result<bool> {
        if p.validate(a.len()).is_err() || !is_permutation(order, a.len()) {
            return Ok(false);
        }
        for i in 1..=order.len() {
            let ai = a.subarrangement(&order[..i]);
            let pi = Partition::new(
                p.blocks()
                    .iter()
                    .map(|b| (0..i).filter(|&j| b.contains(&order[j])).collect::<Vec<_>>())
                    .filter(|b| !b.is_empty())
                    .collect(),
            );
            let map = restriction_map(&ai, &pi, i - 1)?;
            let Some(q) = &map.induced else {
                return Ok(false);
            };
            if !self.ifac_pair(&map.triple.restricted, q)? {
                return Ok(false);
            }
        }
        Ok(self.is_nice(a, p)?.verdict)
    }
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n && order.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

fn no_singleton_ok(a: &Arrangement, p: &Partition, flat: &[usize], induced: &Partition) -> bool {
    let Some(members) = zero_based(flat) else {
        return false;
    };
    if p.validate(a.len()).is_err() || members.is_empty() {
        return false;
    }
    let Ok(x) = Flat::from_hyperplanes(a, &members) else {
        return false;
    };
    x.members() == members.as_slice() && p.induced(&members) == *induced && induced.blocks().iter().all(|b| b.len() != 1)
}

fn chain_ok(a: &Arrangement, flats: &[Vec<usize>]) -> bool {
    let mut chain = Vec::with_capacity(flats.len());
    for f in flats {
        let Some(m) = zero_based(f) else {
            return false;
        };
        match Flat::from_hyperplanes(a, &m) {
            Ok(x) if x.members() == m.as_slice() => chain.push(x),
            _ => return false,
        }
    }
    nice_from_modular_chain(a, &chain).is_ok()
}
