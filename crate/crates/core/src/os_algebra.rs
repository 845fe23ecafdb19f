//! The graded Orlik–Solomon algebra on its no-broken-circuit basis, and the
//! multiplication map κ from the tensor product of the block spaces.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::factor::{Certificate, Partition, Property, Session, Witness};
use crate::lattice::Poly;
use crate::linalg::{rank, Row};
use crate::scalar::FieldSpec;

pub const MAX_HYPERPLANES: usize = 20;

/// Sparse combination of NBC monomials, keyed by sorted index sets.
pub type OsElement = BTreeMap<Vec<usize>, BigInt>;

pub struct Matroid {
    n: usize,
    rank: usize,
    /// Independent subsets as bitmasks.
    independent: HashSet<u32>,
    /// Circuits, sorted, in order of discovery (by size, then colex mask).
    circuits: Vec<Vec<usize>>,
    /// Per degree p, the NBC p-sets in lexicographic order.
    nbc: Vec<Vec<Vec<usize>>>,
    memo: RefCell<HashMap<u32, OsElement>>,
}

fn mask_of(s: &[usize]) -> u32 {
    s.iter().fold(0, |m, &i| m | (1 << i))
}

fn elements(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}

/// Sign of sorting the concatenation of two sorted, disjoint lists.
fn merge_sign(x: &[usize], y: &[usize]) -> i32 {
    let inv: usize = x.iter().map(|a| y.iter().filter(|&&b| b < *a).count()).sum();
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Sign of the permutation sorting `v` (distinct entries).
fn sort_sign(v: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] > v[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

impl Matroid {
    pub fn new(a: &Arrangement) -> Result<Matroid> {
        let n = a.len();
        if n > MAX_HYPERPLANES {
            return Err(Error::CapExceeded { what: "hyperplanes", count: n as u128, cap: MAX_HYPERPLANES as u128 });
        }
        let normals: Vec<Row> = (0..n).map(|i| a.normal(i).to_vec()).collect();
        let r = a.rank();
        // Independent sets grow one element at a time from independent sets.
        let mut independent: HashSet<u32> = HashSet::from([0]);
        let mut layer: Vec<u32> = vec![0];
        let mut circuits = Vec::new();
        for size in 1..=r + 1 {
            let mut next = Vec::new();
            let mut cand: Vec<u32> = layer
                .iter()
                .flat_map(|&m| {
                    let top = 32 - m.leading_zeros() as usize;
                    (top..n).map(move |i| m | (1 << i))
                })
                .collect();
            cand.sort_unstable();
            cand.dedup();
            // Candidates extend an independent set by a larger index; a
            // circuit C has every C∖e independent, in particular C∖max C.
            for m in cand {
                let s = elements(m);
                let all_minus_indep = s.iter().all(|&e| independent.contains(&(m & !(1 << e))));
                if !all_minus_indep {
                    continue;
                }
                let rk = rank(s.iter().map(|&i| normals[i].clone()).collect());
                if rk == size {
                    if size <= r {
                        next.push(m);
                    }
                } else {
                    circuits.push(s);
                }
            }
            independent.extend(next.iter().copied());
            layer = next;
        }
        let broken: Vec<u32> = circuits.iter().map(|c| mask_of(&c[1..])).collect();
        let mut nbc: Vec<Vec<Vec<usize>>> = vec![Vec::new(); r + 1];
        for &m in &independent {
            if broken.iter().all(|&b| m & b != b) {
                let s = elements(m);
                nbc[s.len()].push(s);
            }
        }
        for level in &mut nbc {
            level.sort();
        }
        Ok(Matroid { n, rank: r, independent, circuits, nbc, memo: RefCell::default() })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn circuits(&self) -> &[Vec<usize>] {
        &self.circuits
    }

    pub fn broken_circuits(&self) -> Vec<Vec<usize>> {
        self.circuits.iter().map(|c| c[1..].to_vec()).collect()
    }

    pub fn is_independent(&self, s: &[usize]) -> bool {
        self.independent.contains(&mask_of(s))
    }

    /// NBC sets of size p.
    pub fn nbc(&self, p: usize) -> &[Vec<usize>] {
        self.nbc.get(p).map_or(&[], Vec::as_slice)
    }

    pub fn poincare(&self) -> Poly {
        Poly::new(self.nbc.iter().map(|l| BigInt::from(l.len())).collect())
    }

    /// Express a_{s_1}⋯a_{s_p} in the NBC basis.
    pub fn straighten(&self, s: &[usize]) -> Result<OsElement> {
        if let Some(&i) = s.iter().find(|&&i| i >= self.n) {
            return Err(Error::OutOfRange(i + 1));
        }
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::NotSorted);
        }
        Ok(self.straighten_mask(mask_of(s)))
    }

    fn straighten_mask(&self, m: u32) -> OsElement {
        if let Some(e) = self.memo.borrow().get(&m) {
            return e.clone();
        }
        let out = self.straighten_uncached(m);
        self.memo.borrow_mut().insert(m, out.clone());
        out
    }

    fn straighten_uncached(&self, m: u32) -> OsElement {
        let mut out = OsElement::new();
        if !self.independent.contains(&m) {
            return out;
        }
        let s = elements(m);
        let Some(c) = self.circuits.iter().find(|c| {
            let b = mask_of(&c[1..]);
            m & b == b
        }) else {
            out.insert(s, BigInt::one());
            return out;
        };
        // a_s = ε a_B a_R with B = C∖c_0, and
        // a_B = Σ_{j≥1} (-1)^(j+1) a_{C∖c_j}.
        let b = &c[1..];
        let r: Vec<usize> = s.iter().filter(|i| !b.contains(i)).copied().collect();
        let eps = merge_sign(b, &r);
        for j in 1..c.len() {
            let cj: Vec<usize> = c.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect();
            if cj.iter().any(|x| r.contains(x)) {
                continue;
            }
            let sign = eps * if j % 2 == 1 { 1 } else { -1 } * merge_sign(&cj, &r);
            let t = mask_of(&cj) | mask_of(&r);
            for (k, v) in self.straighten_mask(t) {
                let e = out.entry(k).or_insert_with(BigInt::zero);
                *e += v * sign;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

pub fn os_poincare(a: &Arrangement) -> Result<Poly> {
    Ok(Matroid::new(a)?.poincare())
}

/// e_d of the block sizes: the dimension of the degree-d domain of κ.
fn elementary(sizes: &[usize], d: usize) -> u128 {
    let mut e = vec![0u128; d + 1];
    e[0] = 1;
    for &s in sizes {
        for k in (1..=d).rev() {
            e[k] = e[k].saturating_add(e[k - 1].saturating_mul(s as u128));
        }
    }
    e[d]
}

impl Session {
    /// Whether κ: ⊗[π_i] → A(𝒜) is a graded isomorphism.
    pub fn kappa_is_isomorphism(&self, a: &Arrangement, p: &Partition) -> Result<Certificate> {
        p.validate(a.len())?;
        let m = Matroid::new(a)?;
        let sizes = p.sizes();
        let top = p.len().max(m.rank());
        let total: u128 = (0..=top).map(|d| elementary(&sizes, d)).fold(0, u128::saturating_add);
        if total > self.config.max_transversals {
            return Err(Error::CapExceeded { what: "κ domain basis", count: total, cap: self.config.max_transversals });
        }
        let prop = Property::KappaIsomorphism;
        let mut dims = vec![1];
        for d in 1..=top {
            let domain = elementary(&sizes, d) as usize;
            let codomain = m.nbc(d).len();
            if domain != codomain {
                let w = Witness::DimensionMismatch { degree: d, domain, codomain };
                return Ok(Certificate::new(prop, false, w).with_partition(p));
            }
            if !kappa_invertible(&m, p, d) {
                return Ok(Certificate::new(prop, false, Witness::Singular { degree: d }).with_partition(p));
            }
            dims.push(domain);
        }
        Ok(Certificate::new(prop, true, Witness::GradedDimensions { dims }).with_partition(p))
    }
}

fn kappa_invertible(m: &Matroid, p: &Partition, d: usize) -> bool {
    let column: HashMap<&Vec<usize>, usize> = m.nbc(d).iter().enumerate().map(|(k, s)| (s, k)).collect();
    let q = FieldSpec::Rationals;
    let mut rows: Vec<Row> = Vec::new();
    let mut choice: Vec<usize> = Vec::with_capacity(d);
    block_subsets(p.len(), d, &mut Vec::new(), &mut |bs| {
        tuples(p, bs, &mut choice, &mut |t| {
            let sign = sort_sign(t);
            let mut sorted = t.to_vec();
            sorted.sort_unstable();
            let mut row = vec![q.zero(); column.len()];
            if sorted.windows(2).all(|w| w[0] < w[1]) {
                for (k, v) in m.straighten_mask(mask_of(&sorted)) {
                    row[column[&k]] = q.from_int(&(v * sign));
                }
            }
            rows.push(row);
        });
    });
    let n = rows.len();
    rank(rows) == n
}

fn block_subsets(s: usize, d: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == d {
        f(cur);
        return;
    }
    let start = cur.last().map_or(0, |&x| x + 1);
    for i in start..s {
        cur.push(i);
        block_subsets(s, d, cur, f);
        cur.pop();
    }
}

fn tuples(p: &Partition, bs: &[usize], cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == bs.len() {
        f(cur);
        return;
    }
    for &h in &p.blocks()[bs[cur.len()]] {
        cur.push(h);
        tuples(p, bs, cur, f);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linform::parse_defining_polynomial;

    fn arr(poly: &str, n: usize) -> Arrangement {
        Arrangement::from_source(&parse_defining_polynomial(poly, FieldSpec::Rationals, n).unwrap()).unwrap()
    }

    fn elem(terms: &[(&[usize], i64)]) -> OsElement {
        terms.iter().map(|(k, v)| (k.to_vec(), BigInt::from(*v))).collect()
    }

    #[test]
    fn b2_by_hand() {
        // H1 = x, H2 = y, H3 = x-y, H4 = x+y (0-based below). Every triple is
        // a circuit; the broken circuits are 23, 24, 34, so NBC_2 = 12, 13, 14.
        let m = Matroid::new(&arr("x y (x-y) (x+y)", 2)).unwrap();
        assert_eq!(m.nbc(2), &[vec![0, 1], vec![0, 2], vec![0, 3]]);
        assert_eq!(m.poincare(), Poly::from_i64(&[1, 4, 3]));
        // ∂(a_1 a_3 a_4) = a_3a_4 - a_1a_4 + a_1a_3 = 0
        assert_eq!(m.straighten(&[2, 3]).unwrap(), elem(&[(&[0, 3], 1), (&[0, 2], -1)]));
        assert!(m.straighten(&[1, 2, 3]).unwrap().is_empty());
        assert_eq!(m.straighten(&[0, 1]).unwrap(), elem(&[(&[0, 1], 1)]));
        assert_eq!(m.straighten(&[1, 0]).unwrap_err(), Error::NotSorted);
        assert_eq!(m.straighten(&[4]).unwrap_err(), Error::OutOfRange(5));
    }

    #[test]
    fn kappa_b2() {
        let s = Session::default();
        let a = arr("x y (x-y) (x+y)", 2);
        let c = s.kappa_is_isomorphism(&a, &Partition::parse("1,3|2,4").unwrap()).unwrap();
        assert_eq!(c.witness, Witness::DimensionMismatch { degree: 2, domain: 4, codomain: 3 });
        assert!(s.kappa_is_isomorphism(&a, &Partition::parse("1|2,3,4").unwrap()).unwrap().verdict);
    }

    #[test]
    fn elementary_symmetric() {
        assert_eq!(elementary(&[1, 2, 2], 2), 8);
        assert_eq!(elementary(&[1, 2, 2], 3), 4);
        assert_eq!(elementary(&[], 0), 1);
    }
}
