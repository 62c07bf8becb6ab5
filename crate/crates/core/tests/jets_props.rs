use num_rational::BigRational;
use proptest::prelude::*;

use pinch_core::catalog::{chart_ring, plane, scroll, veronese, ParamSurface};
use pinch_core::exactalg::{linalg, Monomial, Polynomial, Rationals};
use pinch_core::projector::{exceptional_rank, jet_normalize, random_chart_point};

fn q(x: i64) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `[1 : s : t : f₃ : …]` with each `fⱼ` built from random terms of degree 2 to 4.
fn chart_with_tails(tails: &[Vec<(u32, u32, i64)>]) -> ParamSurface {
    let ring = chart_ring();
    let mut coords = vec![Polynomial::from_i64(&ring, 1), Polynomial::var(&ring, 0), Polynomial::var(&ring, 1)];
    for t in tails {
        let terms = t.iter().map(|&(i, j, c)| (Monomial::from_exponents(&[i, j]), q(c))).collect();
        coords.push(Polynomial::from_terms(&ring, terms));
    }
    let base = plane(coords.len() as i64 - 1).unwrap();
    ParamSurface::new(base.model().clone(), coords).unwrap()
}

fn tail() -> impl Strategy<Value = Vec<(u32, u32, i64)>> {
    let term = (0u32..=4, 0u32..=4, -9i64..=9).prop_filter("degree 2..=4, nonzero", |(i, j, c)| {
        (2..=4).contains(&(i + j)) && *c != 0
    });
    prop::collection::vec(term, 0..5)
}

fn quadratic_rank(g: &[Polynomial<Rationals>]) -> usize {
    let monos = [[2, 0], [1, 1], [0, 2]].map(|e| Monomial::from_exponents(&e));
    let rows: Vec<Vec<BigRational>> = g.iter().map(|p| monos.iter().map(|m| p.coeff(m)).collect()).collect();
    linalg::rank(&Rationals, &rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ramified_along_e_iff_in_m3(tails in prop::collection::vec(tail(), 1..4)) {
        let surface = chart_with_tails(&tails);
        let jets = jet_normalize(&surface, &[q(0), q(0)], 4).unwrap();
        let rank = exceptional_rank(&jets).unwrap();
        prop_assert_eq!(rank.ramified_along_e, jets.in_m3());
        prop_assert!(rank.max_u_degree() <= 2);
    }

    #[test]
    fn ramification_criterion_at_random_points(tails in prop::collection::vec(tail(), 1..3), seed in 0u64..1000) {
        let surface = chart_with_tails(&tails);
        let x = random_chart_point(&surface, seed).unwrap();
        let jets = jet_normalize(&surface, &[q(x[0]), q(x[1])], 4).unwrap();
        prop_assert!(jets.g.iter().all(|g| g.low_degree().is_none_or(|d| d >= 2)));
        prop_assert_eq!(exceptional_rank(&jets).unwrap().ramified_along_e, jets.in_m3());
    }

    #[test]
    fn veronese_second_fundamental_form_is_full(a in -20i64..=20, b in -20i64..=20, den in 1i64..6) {
        // the group acts transitively on the Veronese, so the inversion must recover all three quadrics
        let (_, surface) = veronese().unwrap();
        let x = [BigRational::new(a.into(), den.into()), BigRational::new(b.into(), 1.into())];
        let jets = jet_normalize(&surface, &x, 4).unwrap();
        prop_assert_eq!(quadratic_rank(&jets.g), 3);
        let rank = exceptional_rank(&jets).unwrap();
        prop_assert!(!rank.ramified_along_e);
        prop_assert_eq!(rank.drop_points, Some(0));
    }

    #[test]
    fn scrolls_unramified_along_e(a in 1i64..=4, k in 0i64..=3, seed in 0u64..500) {
        let (_, surface) = scroll(a, a + k).unwrap();
        let x = random_chart_point(&surface, seed).unwrap();
        let jets = jet_normalize(&surface, &[q(x[0]), q(x[1])], 4).unwrap();
        let rank = exceptional_rank(&jets).unwrap();
        prop_assert!(!rank.ramified_along_e);
        prop_assert!(rank.max_u_degree() <= 2);
        // ruled by lines, so every quadric in the second fundamental form vanishes on the ruling;
        // the quadric S(1,1) has codimension one and carries a single one.
        // t = 0 is the directrix, where the form can degenerate further.
        prop_assume!(x[1] != 0);
        let expected = if (a, k) == (1, 0) { 1 } else { 2 };
        prop_assert_eq!(quadratic_rank(&jets.g), expected);
    }
}
