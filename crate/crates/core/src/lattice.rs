//! The intersection lattice: flats, Möbius function, Poincaré polynomial and
//! modular elements.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arrangement::Arrangement;
use crate::error::{Error, Result};
use crate::linalg::{in_row_space, rank, rref, Row};

/// A flat, stored as the RREF of the normals of the hyperplanes containing it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flat {
    rows: Vec<Row>,
    pivots: Vec<usize>,
    members: Vec<usize>,
}

impl Flat {
    /// The whole space V.
    pub fn whole() -> Flat {
        Flat { rows: Vec::new(), pivots: Vec::new(), members: Vec::new() }
    }

    /// The intersection of the given hyperplanes of `a`.
    pub fn from_hyperplanes(a: &Arrangement, idx: &[usize]) -> Result<Flat> {
        if let Some(&i) = idx.iter().find(|&&i| i >= a.len()) {
            return Err(Error::OutOfRange(i + 1));
        }
        let normals: Vec<Row> = idx.iter().map(|&i| a.normal(i).to_vec()).collect();
        Ok(Self::from_rows(a, normals))
    }

    fn from_rows(a: &Arrangement, normals: Vec<Row>) -> Flat {
        if normals.is_empty() {
            return Flat::whole();
        }
        let (rows, pivots) = rref(normals);
        let members = (0..a.len()).filter(|&i| in_row_space(&rows, &pivots, a.normal(i))).collect();
        Flat { rows, pivots, members }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Sorted positions of the hyperplanes containing the flat.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains_hyperplane(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// Check that this is a flat of `a`: its row space is spanned by the
    /// normals it contains and the member list is exact.
    pub fn validate(&self, a: &Arrangement) -> Result<()> {
        if self.rows.iter().any(|r| r.len() != a.dim()) || self.members.iter().any(|&i| i >= a.len()) {
            return Err(Error::NotAFlat);
        }
        let again = Flat::from_hyperplanes(a, &self.members)?;
        if again != *self {
            return Err(Error::NotAFlat);
        }
        Ok(())
    }

    /// Y ≤ X in L(A), i.e. Y ⊇ X as subspaces.
    pub fn is_below(&self, x: &Flat) -> bool {
        is_subset(&self.members, &x.members)
    }
}

pub(crate) fn is_subset(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().filter(|x| b.binary_search(x).is_ok()).copied().collect()
}

#[derive(Debug, Clone)]
pub struct Lattice {
    flats: Vec<Flat>,
    /// `levels[k]` is the range of `flats` of rank k.
    levels: Vec<std::ops::Range<usize>>,
    mobius: Vec<BigInt>,
    index: HashMap<Vec<usize>, usize>,
    normals: Vec<Row>,
}

impl Lattice {
    pub fn build(a: &Arrangement) -> Lattice {
        let mut flats = vec![Flat::whole()];
        #[allow(clippy::single_range_in_vec_init)]
        let mut levels = vec![0..1];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        index.insert(Vec::new(), 0);
        loop {
            let cur = levels.last().unwrap().clone();
            let start = flats.len();
            for f in cur {
                let mut covered: Vec<bool> = vec![false; a.len()];
                for &m in &flats[f].members {
                    covered[m] = true;
                }
                for h in 0..a.len() {
                    if covered[h] {
                        continue;
                    }
                    let mut rows = flats[f].rows.clone();
                    rows.push(a.normal(h).to_vec());
                    let g = Flat::from_rows(a, rows);
                    for &m in &g.members {
                        covered[m] = true;
                    }
                    if !index.contains_key(&g.members) {
                        index.insert(g.members.clone(), flats.len());
                        flats.push(g);
                    }
                }
            }
            if flats.len() == start {
                break;
            }
            levels.push(start..flats.len());
        }
        let mut mobius: Vec<BigInt> = Vec::with_capacity(flats.len());
        for (i, x) in flats.iter().enumerate() {
            if i == 0 {
                mobius.push(BigInt::one());
                continue;
            }
            let mut s = BigInt::zero();
            for level in &levels[..x.rank()] {
                for j in level.clone() {
                    if flats[j].is_below(x) {
                        s += &mobius[j];
                    }
                }
            }
            mobius.push(-s);
        }
        let normals = (0..a.len()).map(|i| a.normal(i).to_vec()).collect();
        Lattice { flats, levels, mobius, index, normals }
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Rank of the arrangement (rank of the center).
    pub fn rank(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn of_rank(&self, k: usize) -> &[Flat] {
        self.levels.get(k).map_or(&[], |r| &self.flats[r.clone()])
    }

    pub fn level_range(&self, k: usize) -> std::ops::Range<usize> {
        self.levels.get(k).cloned().unwrap_or(0..0)
    }

    pub fn center(&self) -> &Flat {
        self.flats.last().expect("lattice has V")
    }

    pub fn mobius(&self, i: usize) -> &BigInt {
        &self.mobius[i]
    }

    /// Position of the flat with the given member set.
    pub fn find(&self, members: &[usize]) -> Option<usize> {
        self.index.get(members).copied()
    }

    pub fn position(&self, x: &Flat) -> Option<usize> {
        self.find(&x.members).filter(|&i| self.flats[i] == *x)
    }

    pub fn poincare(&self) -> Poly {
        let mut c = vec![BigInt::zero(); self.levels.len()];
        for (k, r) in self.levels.iter().enumerate() {
            for i in r.clone() {
                if k % 2 == 0 {
                    c[k] += &self.mobius[i];
                } else {
                    c[k] -= &self.mobius[i];
                }
            }
        }
        Poly::new(c)
    }

    /// X is modular iff X + Y is a flat for every flat Y. The normal space of
    /// X + Y is the intersection of the normal spaces, so X + Y is a flat iff
    /// that intersection is spanned by the common member normals.
    pub fn is_modular(&self, x: &Flat) -> bool {
        self.flats.iter().all(|y| {
            let mut both = x.rows.clone();
            both.extend(y.rows.iter().cloned());
            let cap_dim = x.rank() + y.rank() - rank(both);
            let common: Vec<Row> =
                intersect(&x.members, &y.members).iter().map(|&i| self.normals[i].clone()).collect();
            rank(common) == cap_dim
        })
    }

    /// Re-check μ(V) = 1 and Σ_{Y ≤ X} μ(Y) = 0 for every X > V.
    pub fn check_mobius(&self) -> bool {
        self.mobius[0].is_one()
            && self.flats.iter().enumerate().skip(1).all(|(_, x)| {
                let s: BigInt = self
                    .flats
                    .iter()
                    .enumerate()
                    .filter(|(_, y)| y.is_below(x))
                    .map(|(j, _)| self.mobius[j].clone())
                    .sum();
                s.is_zero()
            })
    }
}

pub fn build_lattice(a: &Arrangement) -> Lattice {
    Lattice::build(a)
}

pub fn poincare(a: &Arrangement) -> Poly {
    Lattice::build(a).poincare()
}

pub fn is_modular(lat: &Lattice, x: &Flat) -> bool {
    lat.is_modular(x)
}

/// Integer polynomial in t, coefficients from the constant term up, with no
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(mut c: Vec<BigInt>) -> Poly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_i64(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn one() -> Poly {
        Poly(vec![BigInt::one()])
    }

    /// 1 + b t
    pub fn linear(b: u64) -> Poly {
        Poly::new(vec![BigInt::one(), BigInt::from(b)])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = BigInt::zero();
        Poly::new((0..n).map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut c = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Multiply by t.
    pub fn shift(&self) -> Poly {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut c = vec![BigInt::zero()];
        c.extend(self.0.iter().cloned());
        Poly(c)
    }

    pub fn product_of_linear(bs: &[u64]) -> Poly {
        bs.iter().fold(Poly::one(), |p, &b| p.mul(&Poly::linear(b)))
    }
}

/// Coefficients serialize as JSON integers when they fit in an i64, as
/// decimal strings otherwise.
impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match i64::try_from(c) {
                Ok(v) => seq.serialize_element(&v)?,
                Err(_) => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Coeff {
            Int(i64),
            Text(String),
        }
        let raw = Vec::<Coeff>::deserialize(d)?;
        let mut c = Vec::with_capacity(raw.len());
        for x in raw {
            c.push(match x {
                Coeff::Int(v) => BigInt::from(v),
                Coeff::Text(t) => t.parse().map_err(serde::de::Error::custom)?,
            });
        }
        Ok(Poly::new(c))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Write `p` as ∏(1 + b_i t) with integers b_i ≥ 1, returned ascending.
/// Roots are stripped one at a time, trying divisors of the leading
/// coefficient. `None` if no such factorization exists.
pub fn try_factor_linear(p: &Poly) -> Option<Vec<u64>> {
    let mut c = p.0.clone();
    if c.first().is_none_or(|c0| !c0.is_one()) {
        return None;
    }
    let mut out = Vec::new();
    while c.len() > 1 {
        let lead = c.last().unwrap().clone();
        if !lead.is_positive() {
            return None;
        }
        let lead: u64 = lead.try_into().ok()?;
        let b = divisors(lead).into_iter().find(|&b| {
            // b^deg · p(-1/b) = Σ c_k (-1)^k b^(deg-k)
            let bb = BigInt::from(b);
            let mut acc = BigInt::zero();
            for (k, ck) in c.iter().enumerate() {
                acc = acc * &bb + if k % 2 == 0 { ck.clone() } else { -ck };
            }
            acc.is_zero()
        })?;
        // divide by (1 + b t): q_k = c_k - b q_{k-1}
        let bb = BigInt::from(b);
        let mut q = Vec::with_capacity(c.len() - 1);
        let mut prev = BigInt::zero();
        for ck in &c[..c.len() - 1] {
            let qk = ck - &bb * &prev;
            q.push(qk.clone());
            prev = qk;
        }
        c = q;
        out.push(b);
    }
    out.sort_unstable();
    Some(out)
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d: Vec<u64> = (1..).take_while(|i| i * i <= n).filter(|i| n.is_multiple_of(*i)).flat_map(|i| [i, n / i]).collect();
    d.sort_unstable();
    d.dedup();
    d
}

/// "(1+t)(1+2t)^2" style rendering of a linear factorization.
pub fn render_factored(bs: &[u64]) -> String {
    if bs.is_empty() {
        return "1".into();
    }
    let mut out = String::new();
    let mut i = 0;
    while i < bs.len() {
        let b = bs[i];
        let j = bs[i..].iter().take_while(|&&x| x == b).count();
        if b == 1 {
            out.push_str("(1+t)");
        } else {
            out.push_str(&format!("(1+{b}t)"));
        }
        if j > 1 {
            out.push_str(&format!("^{j}"));
        }
        i += j;
    }
    out
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
    fn boolean_lattice() {
        let l = Lattice::build(&arr("x y z", 3));
        assert_eq!(l.len(), 8);
        assert_eq!(l.poincare(), Poly::from_i64(&[1, 3, 3, 1]));
        assert!(l.check_mobius());
    }

    #[test]
    fn empty_arrangement() {
        let l = Lattice::build(&Arrangement::empty(FieldSpec::Rationals, 3));
        assert_eq!(l.len(), 1);
        assert_eq!(l.rank(), 0);
        assert_eq!(l.poincare(), Poly::one());
    }

    #[test]
    fn factorization() {
        assert_eq!(try_factor_linear(&Poly::from_i64(&[1, 7, 15, 9])), Some(vec![1, 3, 3]));
        assert_eq!(try_factor_linear(&Poly::one()), Some(vec![]));
        assert_eq!(try_factor_linear(&Poly::from_i64(&[1, 3, 3])), None);
        assert_eq!(try_factor_linear(&Poly::from_i64(&[2, 1])), None);
        assert_eq!(render_factored(&[1, 2, 2]), "(1+t)(1+2t)^2");
        assert_eq!(Poly::from_i64(&[1, 5, 8, 4]).to_string(), "1+5t+8t^2+4t^3");
    }

    #[test]
    fn modular_basics() {
        let a = arr("x y z (x+y) (x+y-z)", 3);
        let l = Lattice::build(&a);
        for f in l.of_rank(1).iter().chain([l.center(), &l.flats()[0]]) {
            assert!(l.is_modular(f));
        }
        let x = Flat::from_hyperplanes(&a, &[0, 1]).unwrap();
        assert_eq!(x.members(), &[0, 1, 3]);
        assert!(l.is_modular(&x));
    }

    #[test]
    fn validate_rejects_partial_members() {
        let a = arr("x y (x+y)", 2);
        let mut f = Flat::from_hyperplanes(&a, &[0, 1]).unwrap();
        assert!(f.validate(&a).is_ok());
        f.members.pop();
        assert_eq!(f.validate(&a), Err(Error::NotAFlat));
    }
}
