mod common;

use arrfac::factor::Hereditary;
use arrfac::linform::{parse_linear_form, render_form};
use arrfac::os_algebra::os_poincare;
use arrfac::{parse_defining_polynomial, Arrangement, FieldSpec, Hyperplane, Lattice, Partition, Poly, Scalar, Session};
use num_bigint::BigInt;
use proptest::prelude::*;

fn fields() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::PrimeField(2)),
        Just(FieldSpec::PrimeField(5)),
        Just(FieldSpec::PrimeField(101)),
        Just(FieldSpec::GF4),
        Just(FieldSpec::CyclotomicQ3),
    ]
}

fn scalar(f: FieldSpec) -> BoxedStrategy<Scalar> {
    let ratio = (-20i64..=20, 1i64..=6)
        .prop_map(move |(n, d)| f.from_ratio(&BigInt::from(n), &BigInt::from(d)).unwrap());
    match f {
        FieldSpec::Rationals => ratio.boxed(),
        FieldSpec::PrimeField(p) => (0..p as i64).prop_map(move |n| f.from_i64(n)).boxed(),
        FieldSpec::GF4 => prop::sample::select(f.elements().unwrap()).boxed(),
        FieldSpec::CyclotomicQ3 => (ratio.clone(), ratio)
            .prop_map(move |(a, b)| a.add(&b.mul(&f.zeta().unwrap())))
            .boxed(),
    }
}

fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    fields().prop_flat_map(|f| (scalar(f), scalar(f), scalar(f)))
}

proptest! {
    #[test]
    fn field_axioms((a, b, c) in triple()) {
        let f = a.field();
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&f.zero()), a.clone());
        prop_assert_eq!(a.mul(&f.one()), a.clone());
        prop_assert!(a.add(&a.neg()).is_zero());
        prop_assert_eq!(a.sub(&b).add(&b), a.clone());
        if a.is_zero() {
            prop_assert!(a.inv().is_err());
        } else {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
            prop_assert_eq!(b.mul(&a).div(&a).unwrap(), b);
        }
    }

    #[test]
    fn scalar_text_round_trip(a in fields().prop_flat_map(scalar)) {
        prop_assert_eq!(Scalar::parse(&a.to_string(), a.field()).unwrap(), a);
    }

    #[test]
    fn form_text_round_trip(f in fields(), n in 1usize..=5, seed in any::<u64>()) {
        let els = sample_elements(f, n, seed);
        prop_assume!(els.iter().any(|s| !s.is_zero()));
        let text = render_form(&els, f);
        let back = parse_linear_form(&text, f, n).unwrap();
        prop_assert_eq!(back.coeffs(), els.as_slice(), "{}", text);
    }

    #[test]
    fn parser_never_panics(text in "[xyzt0-9+\\-*^/() z]{0,40}", n in 1usize..=4) {
        for f in [FieldSpec::Rationals, FieldSpec::GF4, FieldSpec::CyclotomicQ3] {
            let _ = parse_defining_polynomial(&text, f, n);
        }
    }
}

/// Deterministic field elements for a seed, without a strategy per field.
fn sample_elements(f: FieldSpec, n: usize, seed: u64) -> Vec<Scalar> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| match f {
            FieldSpec::GF4 => f.elements().unwrap()[rng.gen_range(0..4)].clone(),
            FieldSpec::CyclotomicQ3 => f.from_i64(rng.gen_range(-3..=3)).add(&f.from_i64(rng.gen_range(-3..=3)).mul(&f.zeta().unwrap())),
            FieldSpec::PrimeField(_) => f.from_i64(rng.gen_range(-9..=9)),
            _ => f.from_ratio(&BigInt::from(rng.gen_range(-9..=9)), &BigInt::from(rng.gen_range(1..=4))).unwrap(),
        })
        .collect()
}

/// Small rational arrangements in dimension 3.
fn rational_arrangement() -> impl Strategy<Value = Arrangement> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 1..=7).prop_filter_map("degenerate", |rows| {
        let f = FieldSpec::Rationals;
        let mut a = Arrangement::empty(f, 3);
        for r in rows {
            if let Ok(h) = Hyperplane::new(r.iter().map(|&x| f.from_i64(x)).collect()) {
                if a.position(&h).is_none() {
                    a.push(h).unwrap();
                }
            }
        }
        (!a.is_empty()).then_some(a)
    })
}

fn permuted(a: &Arrangement, perm: &[usize]) -> Arrangement {
    a.subarrangement(perm)
}

/// Apply the coordinate change α ↦ α ∘ M to every normal.
fn transformed(a: &Arrangement, m: &[[i64; 3]; 3]) -> Arrangement {
    let f = a.field();
    let normals = (0..a.len())
        .map(|i| {
            let n = a.normal(i);
            (0..3)
                .map(|j| (0..3).fold(f.zero(), |acc, k| acc.add(&n[k].mul(&f.from_i64(m[k][j])))))
                .collect()
        })
        .collect();
    Arrangement::from_normals(f, 3, normals).unwrap()
}

fn det(m: &[[i64; 3]; 3]) -> i64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Every set partition of 0..n via restricted growth strings.
fn all_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    loop {
        let k = rgs.iter().max().map_or(0, |m| m + 1);
        out.push(Partition::new((0..k).map(|b| (0..n).filter(|&i| rgs[i] == b).collect()).collect()));
        let mut i = n;
        loop {
            if i <= 1 {
                return out;
            }
            i -= 1;
            let bound = rgs[..i].iter().max().unwrap() + 1;
            if rgs[i] < bound {
                rgs[i] += 1;
                rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

fn shuffle(n: usize, seed: u64) -> Vec<usize> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    v
}

fn nice_count(s: &Session, a: &Arrangement) -> usize {
    s.find_nice_partitions(a, None).unwrap().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn permutation_invariance(a in rational_arrangement(), seed in any::<u64>()) {
        let s = Session::default();
        let b = permuted(&a, &shuffle(a.len(), seed));
        prop_assert_eq!(Lattice::build(&a).poincare(), Lattice::build(&b).poincare());
        prop_assert_eq!(s.inductive_exponents(&a), s.inductive_exponents(&b));
        prop_assert_eq!(s.is_supersolvable(&a).verdict, s.is_supersolvable(&b).verdict);
        prop_assert_eq!(nice_count(&s, &a), nice_count(&s, &b));
        prop_assert_eq!(s.is_inductively_factored(&a).unwrap().verdict, s.is_inductively_factored(&b).unwrap().verdict);
    }

    #[test]
    fn coordinate_change_invariance(a in rational_arrangement(), m in prop::array::uniform3(prop::array::uniform3(-2i64..=2))) {
        prop_assume!(det(&m) != 0);
        let s = Session::default();
        let b = transformed(&a, &m);
        prop_assert_eq!(Lattice::build(&a).poincare(), Lattice::build(&b).poincare());
        prop_assert_eq!(s.inductive_exponents(&a), s.inductive_exponents(&b));
        prop_assert_eq!(s.find_nice_partitions(&a, None).unwrap(), s.find_nice_partitions(&b, None).unwrap());
    }

    #[test]
    fn search_matches_exhaustive_kappa_oracle(a in rational_arrangement()) {
        let s = Session::default();
        let mut oracle: Vec<Partition> = all_partitions(a.len())
            .into_iter()
            .filter(|p| s.kappa_is_isomorphism(&a, p).unwrap().verdict)
            .collect();
        let mut found = s.find_nice_partitions(&a, None).unwrap();
        oracle.sort();
        found.sort();
        prop_assert_eq!(found, oracle);
    }

    #[test]
    fn lattice_identities(a in rational_arrangement()) {
        let pi = Lattice::build(&a).poincare();
        prop_assert_eq!(os_poincare(&a).unwrap(), pi.clone());
        for h in 0..a.len() {
            let t = a.triple(h).unwrap();
            let rhs = Lattice::build(&t.deleted).poincare().add(&Lattice::build(&t.restricted).poincare().shift());
            prop_assert_eq!(&pi, &rhs);
        }
    }

    #[test]
    fn free_exponents_factor_poincare(a in rational_arrangement()) {
        let s = Session::default();
        if let Some(e) = s.inductive_exponents(&a) {
            let prod = e.iter().fold(Poly::one(), |acc, &b| acc.mul(&Poly::linear(b as u64)));
            prop_assert_eq!(prod, Lattice::build(&a).poincare());
        }
    }

    #[test]
    fn hierarchy_and_certificates(a in rational_arrangement()) {
        let s = Session::default();
        let ss = s.is_supersolvable(&a);
        let ifac = s.is_inductively_factored(&a).unwrap();
        let indfree = s.is_inductively_free(&a);
        let fac = s.is_factored(&a).unwrap();
        prop_assert!(!ss.verdict || ifac.verdict);
        prop_assert!(!ifac.verdict || (indfree.verdict && fac.verdict));
        for c in [&ss, &ifac, &indfree, &fac] {
            prop_assert!(s.verify(&a, c).unwrap(), "{:?}", c);
        }
        let h = s.hereditary_check(&a, Hereditary::Factored).unwrap();
        prop_assert!(s.verify(&a, &h).unwrap());
    }

    #[test]
    fn product_poincare_multiplies(a in rational_arrangement(), b in rational_arrangement()) {
        let s = Session::default();
        let ab = a.product(&b).unwrap();
        let (pa, pb) = (Lattice::build(&a).poincare(), Lattice::build(&b).poincare());
        prop_assert_eq!(Lattice::build(&ab).poincare(), pa.mul(&pb));
        let fa = s.is_factored(&a).unwrap().verdict;
        let fb = s.is_factored(&b).unwrap().verdict;
        prop_assert_eq!(s.is_factored(&ab).unwrap().verdict, fa && fb);
    }
}
