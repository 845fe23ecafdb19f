//! Inductive freeness, inductive factorizations and hereditary checks.

use rayon::prelude::*;

use super::certificate::{one_based, Certificate, Hereditary, Property, Witness};
use super::nice::{padded_exponents, restriction_map_unchecked};
use super::partition::Partition;
use super::session::{IfEntry, Session};
use crate::arrangement::Arrangement;
use crate::error::Result;
use crate::lattice::{try_factor_linear, Lattice};

/// If `small` ⊆ `big` as multisets and `big` has exactly one extra element,
/// return that element. Both sorted.
pub(crate) fn extra_element(big: &[usize], small: &[usize]) -> Option<usize> {
    if big.len() != small.len() + 1 {
        return None;
    }
    let mut rest = big.to_vec();
    for s in small {
        let i = rest.iter().position(|b| b == s)?;
        rest.remove(i);
    }
    Some(rest[0])
}

impl Session {
    pub(crate) fn if_entry(&self, a: &Arrangement) -> Option<IfEntry> {
        let key = a.key();
        if let Some(e) = self.if_memo.lock().unwrap().get(&key) {
            return e.clone();
        }
        let res = if a.is_empty() {
            Some(IfEntry { exponents: vec![0; a.dim()], pivot: None })
        } else {
            self.if_search(a)
        };
        self.if_memo.lock().unwrap().insert(key, res.clone());
        res
    }

    fn if_search(&self, a: &Arrangement) -> Option<IfEntry> {
        for p in 0..a.len() {
            let t = a.triple(p).expect("nonempty");
            let Some(e2) = self.if_entry(&t.restricted) else {
                continue;
            };
            let Some(e1) = self.if_entry(&t.deleted) else {
                continue;
            };
            if let Some(b) = extra_element(&e1.exponents, &e2.exponents) {
                let mut exponents = e2.exponents.clone();
                exponents.push(b + 1);
                exponents.sort_unstable();
                return Some(IfEntry { exponents, pivot: Some(a.hyperplanes()[p].clone()) });
            }
        }
        None
    }

    /// Exponents of `a` if it is inductively free.
    pub fn inductive_exponents(&self, a: &Arrangement) -> Option<Vec<usize>> {
        self.if_entry(a).map(|e| e.exponents)
    }

    pub fn is_inductively_free(&self, a: &Arrangement) -> Certificate {
        match self.if_entry(a) {
            Some(e) => {
                let order = self.if_chain(a);
                Certificate::new(Property::InductivelyFree, true, Witness::InductionOrder { order: one_based(&order) })
                    .with_exponents(e.exponents)
            }
            None => Certificate::new(Property::InductivelyFree, false, Witness::None),
        }
    }

    /// Addition order of the memoized inductive chain, as positions in `a`.
    fn if_chain(&self, a: &Arrangement) -> Vec<usize> {
        let mut cur = a.clone();
        let mut orig: Vec<usize> = (0..a.len()).collect();
        let mut rev = Vec::new();
        while !cur.is_empty() {
            let e = self.if_entry(&cur).expect("chain of a free arrangement");
            let h = e.pivot.expect("nonempty arrangement has a pivot");
            let pos = cur.position(&h).expect("pivot belongs to the arrangement");
            rev.push(orig.remove(pos));
            cur = cur.delete(pos);
        }
        rev.reverse();
        rev
    }

    /// Pair form: is `p` an inductive factorization of `a`?
    pub fn is_inductive_factorization(&self, a: &Arrangement, p: &Partition) -> Result<Certificate> {
        p.validate(a.len())?;
        let prop = Property::InductiveFactorization;
        if let Some(w) = self.ifac_prune(a, p) {
            return Ok(Certificate::new(prop, false, w).with_partition(p));
        }
        if self.ifac_pair(a, p)? {
            let order = self.ifac_chain(a, p);
            let exps = padded_exponents(a.dim(), &p.sizes());
            Ok(Certificate::new(prop, true, Witness::Factorization { partition: p.clone(), order: one_based(&order) })
                .with_partition(p)
                .with_exponents(exps))
        } else {
            Ok(Certificate::new(prop, false, Witness::None).with_partition(p))
        }
    }

    /// Necessary conditions: as many blocks as the rank, and inductive
    /// freeness with the block sizes as exponents.
    fn ifac_prune(&self, a: &Arrangement, p: &Partition) -> Option<Witness> {
        let mine = padded_exponents(a.dim(), &p.sizes());
        match self.inductive_exponents(a) {
            None => Some(Witness::None),
            Some(e) if e != mine || p.len() != a.rank() => {
                Some(Witness::ExponentMismatch { exponents: e, block_sizes: p.sizes() })
            }
            Some(_) => None,
        }
    }

    pub(crate) fn ifac_pair(&self, a: &Arrangement, p: &Partition) -> Result<bool> {
        if a.is_empty() {
            return Ok(p.is_empty());
        }
        let key = Session::pair_key(a, p);
        if let Some(r) = self.ifac_memo.lock().unwrap().get(&key) {
            return Ok(r.is_some());
        }
        let mut found = None;
        if self.ifac_prune(a, p).is_none() {
            'search: for (k, block) in p.blocks().iter().enumerate() {
                for &h in block {
                    let map = restriction_map_unchecked(a, p, h, k)?;
                    let Some(q) = &map.induced else {
                        continue;
                    };
                    if self.ifac_pair(&map.triple.restricted, q)? && self.ifac_pair(&map.triple.deleted, &p.delete(h))? {
                        found = Some(a.hyperplanes()[h].clone());
                        break 'search;
                    }
                }
            }
        }
        let ok = found.is_some();
        self.ifac_memo.lock().unwrap().insert(key, found);
        Ok(ok)
    }

    /// Addition order along the deletions of the memoized factorization.
    fn ifac_chain(&self, a: &Arrangement, p: &Partition) -> Vec<usize> {
        let mut cur = a.clone();
        let mut part = p.clone();
        let mut orig: Vec<usize> = (0..a.len()).collect();
        let mut rev = Vec::new();
        while !cur.is_empty() {
            let key = Session::pair_key(&cur, &part);
            let h = self.ifac_memo.lock().unwrap().get(&key).cloned().flatten().expect("chain of a factorization");
            let pos = cur.position(&h).expect("pivot belongs to the arrangement");
            rev.push(orig.remove(pos));
            cur = cur.delete(pos);
            part = part.delete(pos);
        }
        rev.reverse();
        rev
    }

    /// Arrangement form: does some nice partition give an inductive
    /// factorization?
    pub fn is_inductively_factored(&self, a: &Arrangement) -> Result<Certificate> {
        let prop = Property::InductivelyFactored;
        if self.if_entry(a).is_none() {
            return Ok(Certificate::new(prop, false, Witness::None));
        }
        for p in self.find_nice_partitions(a, None)? {
            let c = self.is_inductive_factorization(a, &p)?;
            if c.verdict {
                return Ok(Certificate { property: prop, partition: None, ..c });
            }
        }
        Ok(Certificate::new(prop, false, Witness::None))
    }

    /// Does `a` admit a nice partition?
    pub fn is_factored(&self, a: &Arrangement) -> Result<Certificate> {
        let lat = Lattice::build(a);
        let prop = Property::Factored;
        let pi = lat.poincare();
        if try_factor_linear(&pi).is_none() {
            return Ok(Certificate::new(prop, false, Witness::PoincareNotFactored { poincare: pi }));
        }
        Ok(match self.find_nice_in(a, &lat, Some(1))?.pop() {
            Some(p) => Certificate::new(prop, true, Witness::Partition { partition: p.clone() })
                .with_exponents(padded_exponents(a.dim(), &p.sizes())),
            None => Certificate::new(prop, false, Witness::None),
        })
    }

    pub fn check_property(&self, a: &Arrangement, which: Hereditary) -> Result<Certificate> {
        match which {
            Hereditary::Factored => self.is_factored(a),
            Hereditary::InductivelyFactored => self.is_inductively_factored(a),
            Hereditary::InductivelyFree => Ok(self.is_inductively_free(a)),
        }
    }

    /// The property for every restriction A^X, X = V included. On failure the
    /// witness is the first failing flat in lattice order.
    pub fn hereditary_check(&self, a: &Arrangement, which: Hereditary) -> Result<Certificate> {
        let lat = Lattice::build(a);
        let prop = which.hereditary_property();
        let check = |x: &crate::lattice::Flat| -> Result<Option<Witness>> {
            let r = a.restrict(x)?;
            let c = self.check_property(&r, which)?;
            Ok((!c.verdict).then(|| Witness::FailingRestriction { flat: one_based(x.members()), certificate: Box::new(c) }))
        };
        let failing: Option<Result<Witness>> = if self.parallel() {
            self.install(|| lat.flats().par_iter().find_map_first(|x| check(x).transpose()))
        } else {
            lat.flats().iter().find_map(|x| check(x).transpose())
        };
        match failing {
            Some(w) => Ok(Certificate::new(prop, false, w?)),
            None => {
                let top = self.check_property(a, which)?;
                Ok(Certificate { property: prop, partition: None, ..top })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linform::parse_defining_polynomial;
    use crate::scalar::FieldSpec;

    fn arr(poly: &str, n: usize) -> Arrangement {
        Arrangement::from_source(&parse_defining_polynomial(poly, FieldSpec::Rationals, n).unwrap()).unwrap()
    }

    #[test]
    fn multiset_extra() {
        assert_eq!(extra_element(&[1, 2, 2], &[1, 2]), Some(2));
        assert_eq!(extra_element(&[1, 2, 3], &[2, 2]), None);
    }

    #[test]
    fn boolean_and_generic() {
        let s = Session::default();
        let c = s.is_inductively_free(&arr("x y z", 3));
        assert!(c.verdict);
        assert_eq!(c.exponents, Some(vec![1, 1, 1]));
        assert!(!s.is_inductively_free(&arr("x y z (x+y+z)", 3)).verdict);
    }

    #[test]
    fn pair_form_on_boolean() {
        let s = Session::default();
        let a = arr("x y", 2);
        assert!(s.is_inductive_factorization(&a, &Partition::parse("1|2").unwrap()).unwrap().verdict);
        assert!(!s.is_inductive_factorization(&a, &Partition::parse("1,2").unwrap()).unwrap().verdict);
    }
}
