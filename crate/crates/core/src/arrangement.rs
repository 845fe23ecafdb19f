//! Central arrangements and the standard constructions on them: deletion and
//! restriction triples, localization, restriction to a flat, and products.

use std::fmt;

use crate::error::{Error, Result};
use crate::lattice::Flat;
use crate::linalg::{normalize, restrict_form, Row};
use crate::linform::{render_form, ArrangementSource, LinearForm};
use crate::scalar::{FieldSpec, Scalar};

/// A hyperplane through the origin, stored by its normal vector scaled so the
/// first nonzero entry is one.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperplane {
    normal: Row,
}

impl Hyperplane {
    pub fn new(mut normal: Row) -> Result<Self> {
        if normal.iter().all(Scalar::is_zero) {
            return Err(Error::ZeroFactor { factor: 0 });
        }
        normalize(&mut normal);
        Ok(Hyperplane { normal })
    }

    pub fn normal(&self) -> &[Scalar] {
        &self.normal
    }
}

/// Memoization key: field, dimension and the sorted normals. The sort makes
/// the key independent of the hyperplane order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrKey {
    pub field: FieldSpec,
    pub dim: usize,
    pub normals: Vec<Row>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    field: FieldSpec,
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
    labels: Option<Vec<String>>,
}

impl Arrangement {
    /// The empty arrangement in dimension `dim`.
    pub fn empty(field: FieldSpec, dim: usize) -> Self {
        Arrangement { field, dim, hyperplanes: Vec::new(), labels: None }
    }

    /// Build from raw normals; they are normalized and must be distinct.
    pub fn from_normals(field: FieldSpec, dim: usize, normals: Vec<Row>) -> Result<Self> {
        let mut hyperplanes: Vec<Hyperplane> = Vec::with_capacity(normals.len());
        for (k, n) in normals.into_iter().enumerate() {
            if n.len() != dim {
                return Err(Error::Schema(format!("normal {} has length {}, expected {dim}", k + 1, n.len())));
            }
            if let Some(s) = n.iter().find(|s| s.field() != field) {
                return Err(Error::MixedFields(field.to_string(), s.field().to_string()));
            }
            let h = Hyperplane::new(n).map_err(|_| Error::ZeroFactor { factor: k + 1 })?;
            if let Some(i) = hyperplanes.iter().position(|g| *g == h) {
                return Err(Error::DuplicateHyperplane { first: i + 1, second: k + 1 });
            }
            hyperplanes.push(h);
        }
        Ok(Arrangement { field, dim, hyperplanes, labels: None })
    }

    /// Normalized, order-preserving arrangement from parsed input.
    pub fn from_source(src: &ArrangementSource) -> Result<Self> {
        let normals = src.forms.iter().map(|f| f.0.clone()).collect();
        let mut a = Self::from_normals(src.field, src.nvars, normals)?;
        a.labels = src.labels.clone();
        Ok(a)
    }

    pub fn to_source(&self) -> ArrangementSource {
        ArrangementSource {
            field: self.field,
            nvars: self.dim,
            forms: self.hyperplanes.iter().map(|h| LinearForm(h.normal.clone())).collect(),
            labels: self.labels.clone(),
            partition: None,
        }
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Self {
        self.labels = labels;
        self
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn normal(&self, i: usize) -> &[Scalar] {
        &self.hyperplanes[i].normal
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn position(&self, h: &Hyperplane) -> Option<usize> {
        self.hyperplanes.iter().position(|g| g == h)
    }

    pub fn key(&self) -> ArrKey {
        let mut normals: Vec<Row> = self.hyperplanes.iter().map(|h| h.normal.clone()).collect();
        normals.sort();
        ArrKey { field: self.field, dim: self.dim, normals }
    }

    /// Positions of the hyperplanes in key (sorted) order.
    pub fn key_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&a, &b| self.hyperplanes[a].cmp(&self.hyperplanes[b]));
        idx
    }

    pub fn rank(&self) -> usize {
        crate::linalg::rank(self.hyperplanes.iter().map(|h| h.normal.clone()).collect())
    }

    /// Sub-arrangement on the given positions, in the given order.
    pub fn subarrangement(&self, idx: &[usize]) -> Arrangement {
        Arrangement {
            field: self.field,
            dim: self.dim,
            hyperplanes: idx.iter().map(|&i| self.hyperplanes[i].clone()).collect(),
            labels: self.labels.as_ref().map(|l| idx.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    pub fn delete(&self, pivot: usize) -> Arrangement {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| i != pivot).collect();
        self.subarrangement(&idx)
    }

    pub fn push(&mut self, h: Hyperplane) -> Result<()> {
        if h.normal.len() != self.dim {
            return Err(Error::Schema("hyperplane dimension mismatch".into()));
        }
        if let Some(i) = self.position(&h) {
            return Err(Error::DuplicateHyperplane { first: i + 1, second: self.len() + 1 });
        }
        self.hyperplanes.push(h);
        self.labels = None;
        Ok(())
    }

    /// Restriction of the hyperplanes outside `skip` to the solution space of
    /// `basis`. Images are deduplicated keeping the earliest preimage's
    /// position; the returned trace maps each position to its image (None for
    /// positions in `skip`).
    fn restrict_rows(&self, basis: &[Row], pivots: &[usize], skip: &[usize]) -> (Arrangement, Vec<Option<usize>>) {
        let dim = self.dim - pivots.len();
        let mut images: Vec<Hyperplane> = Vec::new();
        let mut trace = vec![None; self.len()];
        for (i, h) in self.hyperplanes.iter().enumerate() {
            if skip.contains(&i) {
                continue;
            }
            let form = restrict_form(basis, pivots, &h.normal);
            let Ok(img) = Hyperplane::new(form) else {
                continue;
            };
            let k = match images.iter().position(|g| *g == img) {
                Some(k) => k,
                None => {
                    images.push(img);
                    images.len() - 1
                }
            };
            trace[i] = Some(k);
        }
        (Arrangement { field: self.field, dim, hyperplanes: images, labels: None }, trace)
    }

    pub fn triple(&self, pivot: usize) -> Result<Triple> {
        if self.is_empty() {
            return Err(Error::EmptyArrangement);
        }
        if pivot >= self.len() {
            return Err(Error::OutOfRange(pivot + 1));
        }
        let n = &self.hyperplanes[pivot].normal;
        let lead = n.iter().position(|c| !c.is_zero()).expect("nonzero normal");
        let (restricted, trace) = self.restrict_rows(std::slice::from_ref(n), &[lead], &[pivot]);
        Ok(Triple { deleted: self.delete(pivot), restricted, pivot, trace })
    }

    /// A_X: the hyperplanes containing the flat, in arrangement order.
    pub fn localize(&self, x: &Flat) -> Result<Arrangement> {
        x.validate(self)?;
        Ok(self.subarrangement(x.members()))
    }

    /// A^X in coordinates on X given by the free variables of X's RREF.
    pub fn restrict(&self, x: &Flat) -> Result<Arrangement> {
        x.validate(self)?;
        Ok(self.restrict_rows(x.rows(), x.pivots(), x.members()).0)
    }

    pub fn product(&self, other: &Arrangement) -> Result<Arrangement> {
        if self.field != other.field {
            return Err(Error::MixedFields(self.field.to_string(), other.field.to_string()));
        }
        let zero = self.field.zero();
        let mut hyperplanes = Vec::with_capacity(self.len() + other.len());
        for h in &self.hyperplanes {
            let mut n = h.normal.clone();
            n.extend(std::iter::repeat_n(zero.clone(), other.dim));
            hyperplanes.push(Hyperplane { normal: n });
        }
        for h in &other.hyperplanes {
            let mut n = vec![zero.clone(); self.dim];
            n.extend(h.normal.iter().cloned());
            hyperplanes.push(Hyperplane { normal: n });
        }
        let labels = match (&self.labels, &other.labels) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        Ok(Arrangement { field: self.field, dim: self.dim + other.dim, hyperplanes, labels })
    }

    pub fn form_string(&self, i: usize) -> String {
        render_form(&self.hyperplanes[i].normal, self.field)
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "Phi_{}", self.dim);
        }
        for i in 0..self.len() {
            write!(f, "({})", self.form_string(i))?;
        }
        Ok(())
    }
}

/// Deletion and restriction with respect to a pivot hyperplane.
#[derive(Debug, Clone)]
pub struct Triple {
    pub deleted: Arrangement,
    /// Lives in coordinates on the pivot: the variable of the pivot's leading
    /// coefficient is eliminated.
    pub restricted: Arrangement,
    pub pivot: usize,
    /// Indexed by position in the whole arrangement; `None` only at the pivot.
    pub trace: Vec<Option<usize>>,
}

impl Triple {
    /// Position in the deletion of a position in the whole arrangement.
    pub fn deleted_index(&self, i: usize) -> Option<usize> {
        use std::cmp::Ordering::*;
        match i.cmp(&self.pivot) {
            Less => Some(i),
            Equal => None,
            Greater => Some(i - 1),
        }
    }

    pub fn whole_index(&self, j: usize) -> usize {
        if j < self.pivot {
            j
        } else {
            j + 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linform::parse_defining_polynomial;

    fn arr(poly: &str, n: usize) -> Arrangement {
        Arrangement::from_source(&parse_defining_polynomial(poly, FieldSpec::Rationals, n).unwrap()).unwrap()
    }

    #[test]
    fn boolean_triple() {
        let a = arr("x y z", 3);
        let t = a.triple(0).unwrap();
        assert_eq!(t.deleted.len(), 2);
        assert_eq!(t.restricted.len(), 2);
        assert_eq!(t.restricted.dim(), 2);
        assert_eq!(t.trace, vec![None, Some(0), Some(1)]);
    }

    #[test]
    fn b2_restriction_to_x() {
        // Restricting to ker x, the three lines y, x-y, x+y all become the
        // single point y = 0 of the line ker x.
        let a = arr("x y (x-y) (x+y)", 2);
        let t = a.triple(0).unwrap();
        assert_eq!(t.restricted.len(), 1);
        assert_eq!(t.trace, vec![None, Some(0), Some(0), Some(0)]);
    }

    #[test]
    fn triple_union_recovers_whole() {
        let a = arr("x y z (x+y) (x+y-z)", 3);
        for p in 0..a.len() {
            let t = a.triple(p).unwrap();
            let mut back = t.deleted.clone();
            back.push(a.hyperplanes()[p].clone()).unwrap();
            assert_eq!(back.key(), a.key());
            let used: std::collections::BTreeSet<_> = t.trace.iter().flatten().copied().collect();
            assert_eq!(used.len(), t.restricted.len());
        }
    }

    #[test]
    fn empty_triple_is_an_error() {
        assert_eq!(Arrangement::empty(FieldSpec::Rationals, 2).triple(0).unwrap_err(), Error::EmptyArrangement);
    }

    #[test]
    fn product_layout() {
        let a = arr("x (x-y) (x+y)", 2);
        let phi = Arrangement::empty(FieldSpec::Rationals, 1);
        let p = a.product(&phi).unwrap();
        assert_eq!(p, arr("x (x-y) (x+y)", 3));
        let e = Arrangement::empty(FieldSpec::Rationals, 1)
            .product(&Arrangement::empty(FieldSpec::Rationals, 2))
            .unwrap();
        assert_eq!(e, Arrangement::empty(FieldSpec::Rationals, 3));
        let q = phi.product(&a).unwrap();
        assert_eq!(q, arr("y (y-z) (y+z)", 3));
        assert!(a.product(&Arrangement::empty(FieldSpec::GF4, 1)).is_err());
    }
}
