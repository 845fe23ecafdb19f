//! Independence, niceness, the restriction map and the exhaustive search for
//! nice partitions.

use rayon::prelude::*;
use serde::Serialize;

use super::certificate::{one_based, Certificate, Property, Witness};
use super::partition::Partition;
use super::session::Session;
use crate::arrangement::{Arrangement, Triple};
use crate::error::{Error, Result};
use crate::lattice::{try_factor_linear, Flat, Lattice};
use crate::linalg::{in_row_space, rref, Row};

/// {0^(ℓ-r)} ∪ sizes, ascending.
pub fn padded_exponents(dim: usize, sizes: &[usize]) -> Vec<usize> {
    let mut e = vec![0; dim.saturating_sub(sizes.len())];
    e.extend_from_slice(sizes);
    e.sort_unstable();
    e
}

pub fn induced_partition_at_flat(a: &Arrangement, p: &Partition, x: &Flat) -> Result<Partition> {
    p.validate(a.len())?;
    x.validate(a)?;
    Ok(p.induced(x.members()))
}

/// The map H ↦ H ∩ H₀ on the hyperplanes outside the pivot's block.
#[derive(Debug, Clone)]
pub struct RestrictionMap {
    pub pivot: usize,
    /// Block of the partition containing the pivot.
    pub block: usize,
    pub triple: Triple,
    /// (position in A, position in A'') for every hyperplane outside the
    /// pivot's block.
    pub images: Vec<(usize, usize)>,
    pub injective: bool,
    pub surjective: bool,
    /// Images of the other blocks in block order; only when bijective.
    pub induced: Option<Partition>,
}

impl RestrictionMap {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AddDelReport {
    pub pivot: usize,
    pub nice_whole: bool,
    pub nice_deleted: bool,
    pub bijective: bool,
    pub nice_restricted: bool,
    /// Whether the two-out-of-three rule was contradicted.
    pub violation: bool,
}

impl AddDelReport {
    pub fn third_statement(&self) -> bool {
        self.bijective && self.nice_restricted
    }

    pub fn count_true(&self) -> usize {
        [self.nice_whole, self.nice_deleted, self.third_statement()].iter().filter(|&&b| b).count()
    }
}

pub fn restriction_map(a: &Arrangement, p: &Partition, pivot: usize) -> Result<RestrictionMap> {
    p.validate(a.len())?;
    let block = p.block_of(pivot).ok_or(Error::PivotNotInBlock { pivot: pivot + 1 })?;
    restriction_map_unchecked(a, p, pivot, block)
}

pub(crate) fn restriction_map_unchecked(a: &Arrangement, p: &Partition, pivot: usize, block: usize) -> Result<RestrictionMap> {
    let triple = a.triple(pivot)?;
    let mut images = Vec::new();
    let mut hit = vec![false; triple.restricted.len()];
    let mut injective = true;
    for (k, b) in p.blocks().iter().enumerate() {
        if k == block {
            continue;
        }
        for &h in b {
            let img = triple.trace[h].expect("only the pivot lacks an image");
            injective &= !std::mem::replace(&mut hit[img], true);
            images.push((h, img));
        }
    }
    let surjective = hit.iter().all(|&b| b);
    let induced = (injective && surjective).then(|| {
        Partition::new(
            p.blocks()
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != block)
                .map(|(_, b)| b.iter().map(|&h| triple.trace[h].unwrap()).collect())
                .collect(),
        )
    });
    Ok(RestrictionMap { pivot, block, triple, images, injective, surjective, induced })
}

impl Session {
    pub fn is_independent(&self, a: &Arrangement, p: &Partition) -> Result<Certificate> {
        p.validate(a.len())?;
        let count = p.blocks().iter().fold(1u128, |acc, b| acc.saturating_mul(b.len() as u128));
        if count > self.config.max_transversals {
            return Err(Error::CapExceeded { what: "transversals", count, cap: self.config.max_transversals });
        }
        let cert = match dependent_transversal(a, p) {
            Some(t) => Certificate::new(Property::Independent, false, Witness::DependentTransversal { hyperplanes: one_based(&t) }),
            None => Certificate::new(Property::Independent, true, Witness::None),
        };
        Ok(cert.with_partition(p))
    }

    pub fn is_nice(&self, a: &Arrangement, p: &Partition) -> Result<Certificate> {
        p.validate(a.len())?;
        self.is_nice_in(a, &Lattice::build(a), p)
    }

    pub(crate) fn is_nice_in(&self, a: &Arrangement, lat: &Lattice, p: &Partition) -> Result<Certificate> {
        for x in &lat.flats()[1..] {
            let q = p.induced(x.members());
            if !q.blocks().iter().any(|b| b.len() == 1) {
                let w = Witness::NoSingleton { flat: one_based(x.members()), induced: q };
                return Ok(Certificate::new(Property::Nice, false, w).with_partition(p));
            }
        }
        let ind = self.is_independent(a, p)?;
        if !ind.verdict {
            return Ok(Certificate::new(Property::Nice, false, ind.witness).with_partition(p));
        }
        let exps = padded_exponents(a.dim(), &p.sizes());
        Ok(Certificate::new(Property::Nice, true, Witness::Partition { partition: p.clone() })
            .with_partition(p)
            .with_exponents(exps))
    }

    pub fn exponents_from_partition(&self, a: &Arrangement, p: &Partition) -> Result<Vec<usize>> {
        let c = self.is_nice(a, p)?;
        if !c.verdict {
            return Err(Error::NotNice);
        }
        Ok(padded_exponents(a.dim(), &p.sizes()))
    }

    /// Whether the induced partition of the deletion is nice.
    pub fn is_distinguished(&self, a: &Arrangement, p: &Partition, pivot: usize) -> Result<Certificate> {
        p.validate(a.len())?;
        if pivot >= a.len() {
            return Err(Error::PivotNotInBlock { pivot: pivot + 1 });
        }
        let del = a.delete(pivot);
        self.is_nice(&del, &p.delete(pivot))
    }

    pub fn add_del_check(&self, a: &Arrangement, p: &Partition, pivot: usize) -> Result<AddDelReport> {
        let map = restriction_map(a, p, pivot)?;
        let nice_whole = self.is_nice(a, p)?.verdict;
        let nice_deleted = self.is_nice(&map.triple.deleted, &p.delete(pivot))?.verdict;
        let nice_restricted = match &map.induced {
            Some(q) => self.is_nice(&map.triple.restricted, q)?.verdict,
            None => false,
        };
        let mut r = AddDelReport { pivot, nice_whole, nice_deleted, bijective: map.bijective(), nice_restricted, violation: false };
        r.violation = r.count_true() == 2;
        Ok(r)
    }

    /// All nice partitions with blocks ordered by minimum element, at most
    /// `limit` of them.
    pub fn find_nice_partitions(&self, a: &Arrangement, limit: Option<usize>) -> Result<Vec<Partition>> {
        self.find_nice_in(a, &Lattice::build(a), limit)
    }

    pub(crate) fn find_nice_in(&self, a: &Arrangement, lat: &Lattice, limit: Option<usize>) -> Result<Vec<Partition>> {
        if limit == Some(0) {
            return Ok(Vec::new());
        }
        if a.is_empty() {
            return Ok(vec![Partition::empty()]);
        }
        let Some(sizes) = try_factor_linear(&lat.poincare()) else {
            return Ok(Vec::new());
        };
        let search = Search::new(a, lat, sizes);
        let mut out = Vec::new();
        if self.parallel() {
            let mut prefixes = Vec::new();
            let depth = a.len().min(6);
            let mut st = search.start();
            search.collect_prefixes(&mut st, 0, depth, &mut prefixes);
            let found: Vec<Vec<Vec<usize>>> = self.install(|| {
                prefixes
                    .par_iter()
                    .map(|assign| {
                        let mut st = search.start();
                        let mut hits = Vec::new();
                        if search.replay(&mut st, assign) {
                            search.dfs(&mut st, assign.len(), limit, &mut hits);
                        }
                        hits
                    })
                    .collect()
            });
            for assign in found.into_iter().flatten() {
                out.push(search.to_partition(&assign));
            }
        } else {
            let mut hits = Vec::new();
            let mut st = search.start();
            search.dfs(&mut st, 0, limit, &mut hits);
            out = hits.iter().map(|h| search.to_partition(h)).collect();
        }
        let mut nice = Vec::new();
        for p in out {
            if limit.is_some_and(|l| nice.len() >= l) {
                break;
            }
            if self.is_nice_in(a, lat, &p)?.verdict {
                nice.push(p);
            }
        }
        Ok(nice)
    }
}

fn dependent_transversal(a: &Arrangement, p: &Partition) -> Option<Vec<usize>> {
    fn rec(a: &Arrangement, blocks: &[Vec<usize>], basis: &[Row], pivots: &[usize], chosen: &mut Vec<usize>) -> bool {
        let k = chosen.len();
        if k == blocks.len() {
            return false;
        }
        for &h in &blocks[k] {
            chosen.push(h);
            if in_row_space(basis, pivots, a.normal(h)) {
                for b in &blocks[k + 1..] {
                    chosen.push(b[0]);
                }
                return true;
            }
            let mut rows = basis.to_vec();
            rows.push(a.normal(h).to_vec());
            let (nb, np) = rref(rows);
            if rec(a, blocks, &nb, &np, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    rec(a, p.blocks(), &[], &[], &mut chosen).then_some(chosen)
}

/// Backtracking assignment of hyperplanes to blocks. Every flat X may meet
/// at most r(X) blocks; once all of X's members are placed it must meet
/// exactly r(X) blocks, one of them in a single hyperplane.
struct Search {
    n: usize,
    r: usize,
    /// Target block sizes, descending.
    target: Vec<usize>,
    /// Flats (V excluded) containing each hyperplane.
    flats_of: Vec<Vec<usize>>,
    rank: Vec<usize>,
    last: Vec<usize>,
}

#[derive(Clone)]
struct State {
    assign: Vec<usize>,
    sizes: Vec<usize>,
    counts: Vec<u32>,
    distinct: Vec<usize>,
}

impl Search {
    fn new(a: &Arrangement, lat: &Lattice, sizes: Vec<u64>) -> Search {
        let flats = &lat.flats()[1..];
        let mut flats_of = vec![Vec::new(); a.len()];
        for (f, x) in flats.iter().enumerate() {
            for &m in x.members() {
                flats_of[m].push(f);
            }
        }
        let mut target: Vec<usize> = sizes.iter().map(|&s| s as usize).collect();
        target.sort_unstable_by(|a, b| b.cmp(a));
        Search {
            n: a.len(),
            r: lat.rank(),
            target,
            flats_of,
            rank: flats.iter().map(Flat::rank).collect(),
            last: flats.iter().map(|x| *x.members().last().unwrap()).collect(),
        }
    }

    fn start(&self) -> State {
        State {
            assign: Vec::with_capacity(self.n),
            sizes: Vec::with_capacity(self.r),
            counts: vec![0; self.rank.len() * self.r],
            distinct: vec![0; self.rank.len()],
        }
    }

    fn sizes_feasible(&self, st: &State, placed: usize) -> bool {
        let mut cur = st.sizes.clone();
        cur.sort_unstable_by(|a, b| b.cmp(a));
        if cur.iter().zip(&self.target).any(|(c, t)| c > t) {
            return false;
        }
        self.n - placed >= self.r - st.sizes.len()
    }

    /// Place hyperplane h in block b; false (with the state rolled back) if a
    /// constraint fails.
    fn place(&self, st: &mut State, h: usize, b: usize) -> bool {
        if b == st.sizes.len() {
            st.sizes.push(0);
        }
        st.sizes[b] += 1;
        st.assign.push(b);
        let mut ok = self.sizes_feasible(st, h + 1);
        let mut done = 0;
        if ok {
            for &f in &self.flats_of[h] {
                done += 1;
                let c = &mut st.counts[f * self.r + b];
                *c += 1;
                if *c == 1 {
                    st.distinct[f] += 1;
                }
                if !self.flat_ok(st, f, h) {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            for &f in &self.flats_of[h][..done] {
                let c = &mut st.counts[f * self.r + b];
                *c -= 1;
                if *c == 0 {
                    st.distinct[f] -= 1;
                }
            }
            self.pop_block(st, b);
        }
        ok
    }

    fn flat_ok(&self, st: &State, f: usize, h: usize) -> bool {
        let d = st.distinct[f];
        let rk = self.rank[f];
        if d > rk {
            return false;
        }
        let row = &st.counts[f * self.r..(f + 1) * self.r];
        let has_single = row.contains(&1);
        if h == self.last[f] {
            return d == rk && has_single;
        }
        !(d == rk && !has_single)
    }

    fn pop_block(&self, st: &mut State, b: usize) {
        st.assign.pop();
        st.sizes[b] -= 1;
        if st.sizes[b] == 0 {
            st.sizes.pop();
        }
    }

    fn unplace(&self, st: &mut State, h: usize, b: usize) {
        for &f in &self.flats_of[h] {
            let c = &mut st.counts[f * self.r + b];
            *c -= 1;
            if *c == 0 {
                st.distinct[f] -= 1;
            }
        }
        self.pop_block(st, b);
    }

    fn choices(&self, st: &State) -> std::ops::Range<usize> {
        0..(st.sizes.len() + 1).min(self.r)
    }

    fn dfs(&self, st: &mut State, h: usize, limit: Option<usize>, out: &mut Vec<Vec<usize>>) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        if h == self.n {
            let mut s = st.sizes.clone();
            s.sort_unstable_by(|a, b| b.cmp(a));
            if s == self.target {
                out.push(st.assign.clone());
            }
            return;
        }
        for b in self.choices(st) {
            if self.place(st, h, b) {
                self.dfs(st, h + 1, limit, out);
                self.unplace(st, h, b);
            }
        }
    }

    fn collect_prefixes(&self, st: &mut State, h: usize, depth: usize, out: &mut Vec<Vec<usize>>) {
        if h == depth {
            out.push(st.assign.clone());
            return;
        }
        for b in self.choices(st) {
            if self.place(st, h, b) {
                self.collect_prefixes(st, h + 1, depth, out);
                self.unplace(st, h, b);
            }
        }
    }

    fn replay(&self, st: &mut State, assign: &[usize]) -> bool {
        assign.iter().enumerate().all(|(h, &b)| self.place(st, h, b))
    }

    fn to_partition(&self, assign: &[usize]) -> Partition {
        let mut blocks = vec![Vec::new(); self.r];
        for (h, &b) in assign.iter().enumerate() {
            blocks[b].push(h);
        }
        Partition::new(blocks)
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
    fn boolean_is_nice() {
        let s = Session::default();
        let a = arr("x y z", 3);
        let p = Partition::parse("1|2|3").unwrap();
        assert!(s.is_independent(&a, &p).unwrap().verdict);
        assert!(s.is_nice(&a, &p).unwrap().verdict);
        assert_eq!(s.find_nice_partitions(&a, None).unwrap(), vec![p]);
    }

    #[test]
    fn dependent_witness() {
        let s = Session::default();
        let a = arr("x y (x+y)", 2);
        let c = s.is_independent(&a, &Partition::parse("1|2|3").unwrap()).unwrap();
        assert!(!c.verdict);
        assert!(matches!(c.witness, Witness::DependentTransversal { .. }));
    }

    #[test]
    fn cap_is_enforced() {
        let s = Session::new(super::super::Config { max_transversals: 3, jobs: 1 });
        let a = arr("x y (x+y) (x-y)", 2);
        let err = s.is_independent(&a, &Partition::parse("1,3|2,4").unwrap()).unwrap_err();
        assert!(err.is_cap());
    }

    #[test]
    fn padded() {
        assert_eq!(padded_exponents(3, &[2, 1, 2]), vec![1, 2, 2]);
        assert_eq!(padded_exponents(3, &[]), vec![0, 0, 0]);
    }
}
