use proptest::prelude::*;

use pinch_core::catalog::{
    del_pezzo_model, load_descriptor, ruled_model, save_descriptor, scroll_model, standard_catalog, veronese_model,
    CatalogFilter,
};
use pinch_core::chowlattice::{ruled_pinch, Branch, SurfaceModel};

fn catalog_model() -> impl Strategy<Value = SurfaceModel> {
    prop_oneof![
        (1i64..=6, 0i64..=6).prop_map(|(a, k)| scroll_model(a, a + k).unwrap()),
        Just(veronese_model()),
        (3i64..=9).prop_map(|d| del_pezzo_model(d).unwrap()),
        (0i64..=4, 0i64..=12).prop_map(|(g, k)| ruled_model(g, 2 * g + 3 + k).unwrap()),
    ]
}

fn noether_and_parity(m: &SurfaceModel) -> bool {
    (m.k_squared() + m.c2()).rem_euclid(12) == 0 && m.pinch_number().rem_euclid(2) == 0
}

proptest! {
    #[test]
    fn blow_up_lowers_pinch_by_two_per_point(m in catalog_model(), k in 1usize..5) {
        let b = m.blow_up(k).unwrap();
        prop_assert!(noether_and_parity(&b));
        prop_assert_eq!(b.pinch_number(), m.pinch_number() - 2 * k as i64);
        prop_assert_eq!(b.degree(), m.degree());
        prop_assert_eq!(b.rank(), m.rank() + k);
    }

    #[test]
    fn inner_projection_chain(m in catalog_model()) {
        let mut cur = m.clone();
        let mut steps = 0;
        while cur.ambient() >= 4 {
            let next = cur.inner_projection_model().unwrap();
            prop_assert_eq!(next.pinch_number(), cur.pinch_number() - 4);
            prop_assert_eq!(next.degree(), cur.degree() - 1);
            prop_assert_eq!(next.ambient(), cur.ambient() - 1);
            prop_assert!(noether_and_parity(&next));
            cur = next;
            steps += 1;
        }
        prop_assert_eq!(cur.pinch_number(), m.pinch_number() - 4 * steps);
    }

    #[test]
    fn descriptor_round_trip(m in catalog_model(), k in 0usize..3) {
        let m = if k > 0 { m.blow_up(k).unwrap() } else { m };
        let back = load_descriptor(&save_descriptor(&m)).unwrap();
        prop_assert_eq!(save_descriptor(&back), save_descriptor(&m));
        prop_assert_eq!(back.pinch_number(), m.pinch_number());
    }

    #[test]
    fn ruled_lattice_matches_closed_form(g in 0i64..8, k in 0i64..30) {
        let d = 2 * g + 3 + k;
        let m = ruled_model(g, d).unwrap();
        prop_assert_eq!(m.pinch_number(), ruled_pinch(d, g).unwrap());
        let c = m.classify().unwrap();
        if g == 0 {
            prop_assert_eq!(c.branch, Branch::MinimalScroll);
        } else {
            prop_assert!(c.branch == Branch::OutsideHypotheses || c.branch == Branch::Ruled);
        }
    }
}

#[test]
fn bound_holds_on_catalog() {
    for e in standard_catalog(&CatalogFilter::default()) {
        let m = &e.model;
        assert!(m.flags().uncrumpled, "{}", m.name());
        assert!(m.pinch_number() >= m.bound(), "{}", m.name());
        let equality = m.pinch_number() == m.bound();
        assert_eq!(equality && m.ambient() >= 4, m.flags().scroll && m.ambient() >= 4, "{}", m.name());
    }
}

#[test]
fn gauss_class_of_catalog() {
    // dual of a cubic surface has degree 12; dual of the Veronese is the cubic symmetroid
    assert_eq!(del_pezzo_model(3).unwrap().class_degree(), 12);
    assert_eq!(veronese_model().class_degree(), 3);
    for e in standard_catalog(&CatalogFilter::default()) {
        let g = e.model.gauss_class().unwrap();
        assert_eq!(g.gamma11, e.model.pinch_number());
        assert_eq!(g.gamma2, e.model.class_degree());
    }
}
