//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.
//! All comparisons are exact; each criterion also has a wall-clock limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pinch_core::catalog::{
    del_pezzo, del_pezzo_model, plane, ruled_model, scroll, scroll_model, standard_catalog, veronese,
    CatalogFilter, ParamSurface,
};
use pinch_core::chowlattice::{curve_gauss_coefficient, ruled_pinch, Branch, SurfaceModel};
use pinch_core::exactalg::{
    jacobian_minors, parse_polynomial, GroebnerBudget, Ideal, Monomial, MonomialOrder, Polynomial, PrimeField,
    Rationals, Ring, DEFAULT_PRIME,
};
use pinch_core::projector::{exceptional_rank, jet_normalize, ram_length_with_retries, random_chart_point};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn minimal_bound_equality() -> Outcome {
    let mut n = 0;
    for a in 1..=5 {
        for b in a..=5 {
            let m = scroll_model(a, b).map_err(|e| e.to_string())?;
            let expected = 2 * (a + b + 1) - 6;
            check(m.pinch_number() == expected, || format!("S({a},{b}): {} != {expected}", m.pinch_number()))?;
            n += 1;
        }
    }
    Ok(format!("{n} scrolls at 2N-6"))
}

const RETRIES: usize = 8;

fn explicit_lengths(surface: &ParamSurface, seeds: &[u64]) -> Result<Vec<usize>, String> {
    let budget = GroebnerBudget::default();
    seeds
        .iter()
        .map(|&s| {
            let r = ram_length_with_retries(surface, DEFAULT_PRIME, s, RETRIES, &budget).map_err(|e| e.to_string())?;
            r.length.ok_or_else(|| format!("{} seed {s}: no zero-dimensional attempt", surface.name()))
        })
        .collect()
}

fn veronese_value() -> Outcome {
    let (m, p) = veronese().map_err(|e| e.to_string())?;
    check(m.pinch_number() == 6, || format!("lattice gives {}", m.pinch_number()))?;
    let seeds: Vec<u64> = (0..5).collect();
    let lengths = explicit_lengths(&p, &seeds)?;
    check(lengths.iter().all(|&l| l == 6), || format!("Gröbner lengths {lengths:?}"))?;
    Ok(format!("lattice 6, Gröbner {lengths:?} over GF({DEFAULT_PRIME})"))
}

fn inner_projection_step() -> Outcome {
    let mut n = 0;
    for e in standard_catalog(&CatalogFilter::default()) {
        if e.model.ambient() < 4 {
            continue;
        }
        let m = &e.model;
        let p = m.inner_projection_model().map_err(|err| format!("{}: {err}", m.name()))?;
        check(p.pinch_number() == m.pinch_number() - 4, || format!("{}: pinch step", m.name()))?;
        check(p.degree() == m.degree() - 1, || format!("{}: degree step", m.name()))?;
        n += 1;
    }
    Ok(format!("{n} models"))
}

fn ruled_closed_form() -> Outcome {
    let mut n = 0;
    for g in 0..=3 {
        for d in 3..=12 {
            let m = ruled_model(g, d).map_err(|e| e.to_string())?;
            let closed = ruled_pinch(d, g).map_err(|e| e.to_string())?;
            check(m.pinch_number() == closed, || format!("(g,d)=({g},{d}): {} != {closed}", m.pinch_number()))?;
            n += 1;
        }
    }
    Ok(format!("{n} grid points"))
}

fn expected_branch(m: &SurfaceModel) -> Branch {
    let name = m.name();
    if name.starts_with("scroll:") {
        Branch::MinimalScroll
    } else if name == "veronese" {
        Branch::Veronese
    } else if name == "delpezzo:3" {
        Branch::Generic
    } else {
        Branch::DelPezzo
    }
}

fn near_minimal_classification() -> Outcome {
    for d in 4..=9 {
        let m = del_pezzo_model(d).map_err(|e| e.to_string())?;
        let c = m.classify().map_err(|e| e.to_string())?;
        check(m.pinch_number() == 4 * d - 12, || format!("dP{d}: pinch {}", m.pinch_number()))?;
        check(c.excess == d - 3, || format!("dP{d}: i = {}", c.excess))?;
    }
    let (v, _) = veronese().map_err(|e| e.to_string())?;
    let c = v.classify().map_err(|e| e.to_string())?;
    check((v.ambient(), c.excess) == (5, 1), || format!("Veronese (N, i) = ({}, {})", v.ambient(), c.excess))?;
    let catalog = standard_catalog(&CatalogFilter::default());
    for e in &catalog {
        let c = e.model.classify().map_err(|err| format!("{}: {err}", e.model.name()))?;
        let want = expected_branch(&e.model);
        check(c.branch == want, || format!("{}: {} != {}", e.model.name(), c.branch, want))?;
    }
    Ok(format!("{} catalog surfaces classified", catalog.len()))
}

fn oracle_equivalence() -> Outcome {
    let mut surfaces = vec![
        scroll(1, 2).map_err(|e| e.to_string())?.1,
        scroll(2, 2).map_err(|e| e.to_string())?.1,
        scroll(1, 3).map_err(|e| e.to_string())?.1,
        veronese().map_err(|e| e.to_string())?.1,
    ];
    let seeds: Vec<u64> = (0..5).collect();
    let mut runs = 0;
    for p in surfaces.drain(..) {
        let lengths = explicit_lengths(&p, &seeds)?;
        let want = p.expected_pinch() as usize;
        check(lengths.iter().all(|&l| l == want), || format!("{}: {lengths:?} vs {want}", p.name()))?;
        runs += lengths.len();
    }
    for d in 4..=6 {
        for &s in &seeds {
            // each seed also redraws the del Pezzo base points
            let p = del_pezzo(d, s).map_err(|e| e.to_string())?.1;
            let lengths = explicit_lengths(&p, &[s])?;
            let want = (4 * d - 12) as usize;
            check(lengths == [want], || format!("dP{d} seed {s}: {lengths:?} vs {want}"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} projections agree with the lattice"))
}

fn jet_criterion() -> Outcome {
    let q = |x: i64| num_rational::BigRational::from_integer(x.into());
    let p = plane(5).map_err(|e| e.to_string())?;
    let x = random_chart_point(&p, 1).map_err(|e| e.to_string())?;
    let j = jet_normalize(&p, &[q(x[0]), q(x[1])], 4).map_err(|e| e.to_string())?;
    let r = exceptional_rank(&j).map_err(|e| e.to_string())?;
    check(r.ramified_along_e, || "plane chart not ramified along E".into())?;

    let mut charts = vec![veronese().map_err(|e| e.to_string())?.1];
    for e in standard_catalog(&CatalogFilter::default()) {
        if let pinch_core::catalog::SurfaceSpec::Scroll(a, b) = e.spec {
            charts.push(scroll(a, b).map_err(|e| e.to_string())?.1);
        }
    }
    for (k, c) in charts.iter().enumerate() {
        let x = random_chart_point(c, 100 + k as u64).map_err(|e| e.to_string())?;
        let j = jet_normalize(c, &[q(x[0]), q(x[1])], 4).map_err(|e| e.to_string())?;
        let r = exceptional_rank(&j).map_err(|e| e.to_string())?;
        check(!r.ramified_along_e, || format!("{} ramified along E at {x:?}", c.name()))?;
        check(r.max_u_degree() <= 2, || format!("{}: h has u-degree {}", c.name(), r.max_u_degree()))?;
    }
    Ok(format!("plane ramified; {} charts unramified with deg_u h <= 2", charts.len()))
}

fn random_poly(ring: &std::sync::Arc<Ring<PrimeField>>, rng: &mut ChaCha8Rng, degree: u32) -> Polynomial<PrimeField> {
    let mut terms = Vec::new();
    for i in 0..=degree {
        for j in 0..=degree - i {
            if rng.gen_bool(0.6) || i + j == degree {
                terms.push((Monomial::from_exponents(&[i, j]), rng.gen_range(1..DEFAULT_PRIME)));
            }
        }
    }
    Polynomial::from_terms(ring, terms)
}

fn property_suites() -> Outcome {
    // Noether and parity on the catalog and on blow-ups and inner projections of it
    let mut models = 0;
    for e in standard_catalog(&CatalogFilter::default()) {
        let mut family = vec![e.model.clone()];
        for k in 1..=3 {
            family.push(e.model.blow_up(k).map_err(|err| err.to_string())?);
        }
        let mut cur = e.model.clone();
        while cur.ambient() >= 4 {
            cur = cur.inner_projection_model().map_err(|err| err.to_string())?;
            family.push(cur.clone());
        }
        for m in &family {
            check((m.k_squared() + m.c2()).rem_euclid(12) == 0, || format!("{}: Noether", m.name()))?;
            check(m.pinch_number().rem_euclid(2) == 0, || format!("{}: parity", m.name()))?;
            models += 1;
        }
    }

    // monomial-order independence
    let field = PrimeField::new(DEFAULT_PRIME).map_err(|e| e.to_string())?;
    let ring = Ring::new(&["x", "y"], field, MonomialOrder::DegRevLex);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let budget = GroebnerBudget::default();
    let mut ideals = 0;
    while ideals < 100 {
        let ngens = rng.gen_range(2..=3);
        let gens: Vec<_> = (0..ngens).map(|_| {
            let d = rng.gen_range(1..=3);
            random_poly(&ring, &mut rng, d)
        }).collect();
        let ideal = Ideal::new(&ring, gens).map_err(|e| e.to_string())?;
        let grevlex = ideal.buchberger(MonomialOrder::DegRevLex, &budget).map_err(|e| e.to_string())?;
        if grevlex.quotient_dimension().map_err(|e| e.to_string())? != 0 {
            continue;
        }
        let lex = ideal.buchberger(MonomialOrder::Lex, &budget).map_err(|e| e.to_string())?;
        let (a, b) = (
            grevlex.quotient_length().map_err(|e| e.to_string())?,
            lex.quotient_length().map_err(|e| e.to_string())?,
        );
        check(a == b, || format!("ideal {ideals}: degrevlex {a} vs lex {b}"))?;
        ideals += 1;
    }

    // Whitney umbrella
    let qring = Ring::new(&["s", "t"], Rationals, MonomialOrder::DegRevLex);
    let f: Vec<_> = ["s", "t^2", "s*t"]
        .iter()
        .map(|g| parse_polynomial(&qring, g))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let umbrella = jacobian_minors(&f).and_then(|i| i.groebner()).map_err(|e| e.to_string())?;
    let len = umbrella.quotient_length().map_err(|e| e.to_string())?;
    check(len == 1, || format!("Whitney umbrella length {len}"))?;
    Ok(format!("{models} lattice models, {ideals} ideals, umbrella length 1"))
}

fn curve_coefficient() -> Outcome {
    for n in 2..=10 {
        let g = curve_gauss_coefficient(n, 0).map_err(|e| e.to_string())?;
        check(g == 2 * n - 2, || format!("N = {n}: {g}"))?;
    }
    Ok("2N-2 for 2 <= N <= 10".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("minimal-bound equality on scrolls", minimal_bound_equality, Duration::from_secs(1)),
        ("Veronese has 6 pinch points", veronese_value, Duration::from_secs(10)),
        ("inner projection drops pinch by 4", inner_projection_step, Duration::from_secs(1)),
        ("ruled closed form", ruled_closed_form, Duration::from_secs(1)),
        ("near-minimal classification", near_minimal_classification, Duration::from_secs(1)),
        ("explicit/lattice oracle equivalence", oracle_equivalence, Duration::from_secs(120)),
        ("jet criterion along E", jet_criterion, Duration::from_secs(5)),
        ("property suites", property_suites, Duration::from_secs(120)),
        ("curve coefficient", curve_coefficient, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > *limit => Err(format!("{msg}; took {elapsed:.2?}, limit {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name}: {msg} ({elapsed:.2?})", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {msg} ({elapsed:.2?})", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
