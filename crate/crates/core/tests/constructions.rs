mod common;

use arrfac::linalg::rank;
use arrfac::os_algebra::Matroid;
use arrfac::{parse_defining_polynomial, Arrangement, FieldSpec, Flat, Lattice};
use common::{arrangement, NAMES};

fn q(poly: &str, n: usize) -> Arrangement {
    Arrangement::from_source(&parse_defining_polynomial(poly, FieldSpec::Rationals, n).unwrap()).unwrap()
}

/// Number of distinct subspaces H ∩ H0 for H ≠ H0, compared through the rank
/// of stacked normals: two intersections agree iff adding either normal to
/// the other pair does not raise the rank.
fn distinct_traces(a: &Arrangement, h0: usize) -> usize {
    let pair = |h: usize| vec![a.normal(h0).to_vec(), a.normal(h).to_vec()];
    let mut reps: Vec<usize> = Vec::new();
    for h in (0..a.len()).filter(|&h| h != h0) {
        let same = reps.iter().any(|&r| {
            let mut rows = pair(r);
            rows.push(a.normal(h).to_vec());
            rank(rows) == rank(pair(r))
        });
        if !same {
            reps.push(h);
        }
    }
    reps.len()
}

#[test]
fn b2_restriction_collapses_to_one_point() {
    let b2 = q("x y (x-y) (x+y)", 2);
    let t = b2.triple(0).unwrap();
    assert_eq!(t.restricted.len(), distinct_traces(&b2, 0));
    assert_eq!(t.restricted.len(), 1);
    assert_eq!(t.deleted.len(), 3);
}

#[test]
fn restriction_sizes_match_trace_oracle() {
    for n in NAMES {
        let a = arrangement(n);
        for h in 0..a.len() {
            assert_eq!(a.triple(h).unwrap().restricted.len(), distinct_traces(&a, h), "{n} at {}", h + 1);
        }
    }
}

#[test]
fn localization_and_restriction_sizes_match_lattice() {
    for n in ["ot454", "d13", "g333", "notheredfactored"] {
        let a = arrangement(n);
        let lat = Lattice::build(&a);
        for x in lat.flats() {
            let loc = a.localize(x).unwrap();
            assert_eq!(loc.len(), x.members().len());
            let covers = lat.of_rank(x.rank() + 1).iter().filter(|y| x.is_below(y)).count();
            let res = a.restrict(x).unwrap();
            assert_eq!(res.len(), covers, "{n} at {:?}", x.members());
            assert_eq!(res.dim() + x.rank(), a.dim());
        }
    }
}

#[test]
fn flat_closure_is_idempotent() {
    let a = arrangement("d13");
    for i in 0..a.len() {
        for j in 0..a.len() {
            let x = Flat::from_hyperplanes(&a, &[i, j]).unwrap();
            let y = Flat::from_hyperplanes(&a, x.members()).unwrap();
            assert_eq!(x.members(), y.members());
        }
    }
}

#[test]
fn straighten_is_idempotent_on_nbc_terms() {
    for n in ["a222", "ot454", "d13", "notfactored"] {
        let a = arrangement(n);
        let m = Matroid::new(&a).unwrap();
        let len = a.len();
        for mask in 1u32..(1 << len) {
            let s: Vec<usize> = (0..len).filter(|i| mask >> i & 1 == 1).collect();
            if s.len() > 3 {
                continue;
            }
            let out = m.straighten(&s).unwrap();
            if !m.is_independent(&s) {
                assert!(out.is_empty(), "{n}: dependent {s:?} gives {out:?}");
            }
            for (term, coeff) in &out {
                assert!(m.nbc(term.len()).contains(term), "{n}: {term:?} not NBC");
                let again = m.straighten(term).unwrap();
                assert_eq!(again.len(), 1);
                assert_eq!(again.get(term).map(|c| c.to_string()), Some("1".into()), "{n}: {term:?} coefficient {coeff}");
            }
        }
    }
}

#[test]
fn b2_dependent_triple_vanishes() {
    let b2 = q("x y (x-y) (x+y)", 2);
    let m = Matroid::new(&b2).unwrap();
    assert!(m.straighten(&[1, 2, 3]).unwrap().is_empty());
}
