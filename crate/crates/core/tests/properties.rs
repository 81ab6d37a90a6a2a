mod common;

use std::collections::HashMap;

use common::*;
use num_traits::Zero;
use pfaff_core::classify::{catalog, classify, Label};
use pfaff_core::exactalg::{frac, rational, CommRing, Monomial, Polynomial, QMatrix, Rational, Var};
use pfaff_core::jets::{Jet, ScalarJet, EXACT};
use pfaff_core::pfaffcalc::SkewMatrix;
use pfaff_core::tangent::{cone_deg2, orbit_codim, tangent_codim};
use proptest::prelude::*;
use rand::Rng;

fn rat() -> impl Strategy<Value = Rational> {
    (-20i64..20, 1i64..8).prop_map(|(n, d)| frac(n, d))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u16..3, 5), rat()), 0..6).prop_map(|terms| {
        terms.into_iter().fold(Polynomial::zero(), |acc, (exps, c)| {
            let mono = exps
                .iter()
                .enumerate()
                .fold(Monomial::one(), |m, (k, &e)| m.mul(&Monomial::power(Var::x(k), e)));
            acc + Polynomial::from_terms([(mono, c)])
        })
    })
}

fn qmatrix() -> impl Strategy<Value = QMatrix> {
    (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-3i64..4, c), r).prop_map(move |rows| {
            QMatrix::from_rows(
                rows.into_iter()
                    .map(|row| row.into_iter().map(rational::q).collect())
                    .collect(),
                c,
            )
        })
    })
}

fn scalar_jet() -> impl Strategy<Value = ScalarJet> {
    (prop::collection::vec(rat(), 0..5), prop_oneof![Just(EXACT), 0usize..5]).prop_map(|(c, order)| Jet::new(order, c))
}

fn skew(n: usize) -> impl Strategy<Value = SkewMatrix<Rational>> {
    prop::collection::vec(rat(), n * (n - 1) / 2).prop_map(move |v| {
        let mut it = v.into_iter();
        SkewMatrix::from_fn(n, |_, _| it.next().unwrap())
    })
}

proptest! {
    #[test]
    fn ring_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn polynomial_json_roundtrip(a in poly()) {
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Polynomial>(&s).unwrap(), a);
    }

    #[test]
    fn rational_string_roundtrip(r in rat()) {
        prop_assert_eq!(rational::parse(&rational::to_string(&r)).unwrap(), r);
    }

    #[test]
    fn rank_nullity(m in qmatrix()) {
        let rank = m.rank();
        let ker = m.kernel_basis();
        prop_assert_eq!(rank + ker.rows(), m.cols());
        prop_assert_eq!(rank, bareiss_rank(&m));
        prop_assert_eq!(rank, m.transpose().rank());
        for k in 0..ker.rows() {
            prop_assert!(m.mul_vec(ker.row(k)).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_is_consistent(m in qmatrix(), seed in 0u64..1000) {
        let mut r = rng(seed);
        let x: Vec<Rational> = (0..m.cols()).map(|_| small_rational(&mut r)).collect();
        let b = m.mul_vec(&x);
        let y = m.solve(&b).unwrap();
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn truncation_is_a_ring_map(a in scalar_jet(), b in scalar_jet(), k in 0usize..4) {
        let prod = a.times(&b);
        if k <= prod.order() {
            let lhs = prod.truncate(k).unwrap();
            let rhs = a.truncate(k).unwrap().times(&b.truncate(k).unwrap());
            prop_assert_eq!(lhs, rhs);
        } else {
            prop_assert!(prod.truncate(k).is_err());
        }
    }

    #[test]
    fn cover_is_a_ring_map(a in scalar_jet(), b in scalar_jet(), r in 1usize..4) {
        prop_assert_eq!(a.times(&b).cover(r), a.cover(r).times(&b.cover(r)));
        prop_assert_eq!(a.plus(&b).cover(r), a.cover(r).plus(&b.cover(r)));
        if a.order() != EXACT {
            prop_assert_eq!(a.cover(r).order(), a.order() * r);
        }
        prop_assert_eq!(a.cover(r).first_nonzero().map(|(k, _)| k), a.first_nonzero().map(|(k, _)| k * r));
    }

    #[test]
    fn pfaffian_matches_matchings(m in skew(6)) {
        prop_assert_eq!(m.pfaffian().unwrap(), matching_pfaffian(&m.full()));
    }

    #[test]
    fn pfaffian_of_congruence(m in skew(4), seed in 0u64..1000) {
        let b = random_invertible(&mut rng(seed), 4);
        prop_assert_eq!(m.congruence(&b).pfaffian().unwrap(), bareiss_det(&b) * m.pfaffian().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn invariants_survive_the_group(k in 0usize..6, seed in 0u64..10_000) {
        let label = Label::ALL[k];
        let mut r = rng(seed);
        let m = catalog(label).m;
        let moved = m.congruence(&random_invertible(&mut r, 6)).change_coordinates(&random_invertible(&mut r, 5));
        prop_assert_eq!(classify(&moved).unwrap().label, label);
        prop_assert_eq!(tangent_codim(&moved).unwrap(), tangent_codim(&m).unwrap());
        prop_assert_eq!(orbit_codim(&moved), orbit_codim(&m));
    }
}

#[test]
fn cone_quadrics_obstruct_exactly_the_unliftable_directions() {
    let mut r = rng(5);
    for label in Label::ALL {
        let cone = cone_deg2(&catalog(label).m).unwrap();
        let sys = &cone.system;
        let quadrics = cone.piece.polynomials();
        let (mut lifted, mut blocked) = (0, 0);
        for _ in 0..30 {
            let vals: Vec<Rational> = (0..sys.dim())
                .map(|_| {
                    if r.gen_bool(0.6) {
                        Rational::zero()
                    } else {
                        nonzero_rational(&mut r)
                    }
                })
                .collect();
            let at: HashMap<Var, Polynomial> = sys
                .free_vars()
                .into_iter()
                .zip(&vals)
                .map(|(v, c)| (v, Polynomial::constant(c.clone())))
                .collect();
            let vanish = quadrics.iter().all(|q| q.substitute(&at).is_zero());
            let v = sys.tangent_vector(&vals);
            let lift = sys.lift(&v);
            assert_eq!(lift.is_some(), vanish, "{label}");
            if let Some(m2) = lift {
                let jet = pfaff_core::tangent::pfaffian_jet2(&catalog(label).m.to_skew(), &v.to_skew(), &m2.to_skew());
                assert!(jet.0.is_zero() && jet.1.is_zero());
                lifted += 1;
            } else {
                blocked += 1;
            }
        }
        if cone.dim() == 0 {
            assert_eq!(blocked, 0, "{label}");
        } else {
            assert!(lifted > 0 && blocked > 0, "{label}: {lifted} lifted, {blocked} blocked");
        }
    }
}
