use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ProjectorError;
use crate::catalog::{chart_ring, ParamSurface};
use crate::exactalg::{GroebnerBudget, Ideal, Monomial, MonomialOrder, Polynomial, Rationals, Ring};

type QPoly = Polynomial<Rationals>;

/// Local normal form `[1 : s : t : g₃ : … : g_N]` of a chart at a point, with every
/// `gⱼ` in `𝔪²` and truncated above total degree `ω`.
#[derive(Clone, Debug)]
pub struct JetChart {
    pub point: [BigRational; 2],
    pub omega: u32,
    /// Chart coordinate used to dehomogenize.
    pub denominator: usize,
    /// Chart coordinates that became the local parameters `s`, `t`.
    pub parameters: (usize, usize),
    pub g: Vec<QPoly>,
}

impl JetChart {
    /// Whether every `gⱼ` lies in `𝔪³`.
    pub fn in_m3(&self) -> bool {
        self.g.iter().all(|g| g.low_degree().is_none_or(|d| d >= 3))
    }

    /// The full normalized coordinate list.
    pub fn coordinates(&self) -> Vec<QPoly> {
        let ring = chart_ring();
        let mut out = vec![Polynomial::from_i64(&ring, 1), Polynomial::var(&ring, 0), Polynomial::var(&ring, 1)];
        out.extend(self.g.iter().cloned());
        out
    }
}

/// A random integer chart point in `[−20, 20]²` at which the chart is immersive.
pub fn random_chart_point(surface: &ParamSurface, seed: u64) -> Result<[i64; 2], ProjectorError> {
    const DRAWS: usize = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..DRAWS {
        let x = [rng.gen_range(-20..=20), rng.gen_range(-20..=20)];
        if surface.is_immersive_at(&x) {
            return Ok(x);
        }
    }
    Err(ProjectorError::NotImmersive(format!("no immersive point in {DRAWS} draws")))
}

/// `f(images)` with every intermediate product truncated above degree `omega`.
fn compose(f: &QPoly, images: &[QPoly; 2], omega: u32) -> QPoly {
    let ring = images[0].ring().clone();
    let mut powers: [Vec<QPoly>; 2] = [vec![Polynomial::from_i64(&ring, 1)], vec![Polynomial::from_i64(&ring, 1)]];
    let mut acc = Polynomial::zero(&ring);
    for (m, c) in f.terms() {
        let mut term = Polynomial::constant(&ring, c.clone());
        for (i, &e) in m.exps().iter().enumerate() {
            while powers[i].len() <= e as usize {
                let next = (powers[i].last().unwrap() * &images[i]).truncate(omega);
                powers[i].push(next);
            }
            term = (&term * &powers[i][e as usize]).truncate(omega);
        }
        acc = &acc + &term;
    }
    acc
}

fn linear_coeffs(f: &QPoly) -> [BigRational; 2] {
    [f.coeff(&Monomial::from_exponents(&[1, 0])), f.coeff(&Monomial::from_exponents(&[0, 1]))]
}

fn without_constant(f: &QPoly) -> QPoly {
    let c = f.coeff(&Monomial::one(2));
    f - &Polynomial::constant(f.ring(), c)
}

fn linear(ring: &Arc<Ring<Rationals>>, a: &BigRational, b: &BigRational) -> QPoly {
    &Polynomial::var(ring, 0).scale(a) + &Polynomial::var(ring, 1).scale(b)
}

/// Recenters the chart at `x` and changes target coordinates so that the map reads
/// `[1 : s : t : g₃ : … : g_N]` with `gⱼ ∈ 𝔪²`, all series truncated at degree `omega`.
pub fn jet_normalize(surface: &ParamSurface, x: &[BigRational; 2], omega: u32) -> Result<JetChart, ProjectorError> {
    if omega < 3 {
        return Err(ProjectorError::InvalidArgument(format!("truncation order must be >= 3, got {omega}")));
    }
    let ring = chart_ring();
    let shift = [
        &Polynomial::var(&ring, 0) + &Polynomial::constant(&ring, x[0].clone()),
        &Polynomial::var(&ring, 1) + &Polynomial::constant(&ring, x[1].clone()),
    ];
    let centered: Vec<QPoly> = surface
        .coords()
        .iter()
        .map(|c| c.to_ring(&ring).map(|c| c.substitute(&shift)))
        .collect::<Result<_, _>>()?;
    let origin = Monomial::one(2);
    let denominator = centered
        .iter()
        .position(|c| !c.coeff(&origin).is_zero())
        .ok_or_else(|| ProjectorError::NotImmersive("every coordinate vanishes at the point".into()))?;

    // 1 / P_c as a truncated geometric series
    let a = centered[denominator].coeff(&origin);
    let r = without_constant(&centered[denominator].scale(&(BigRational::one() / &a)));
    let minus_r = -&r;
    let mut inverse = Polynomial::from_i64(&ring, 1);
    let mut power = Polynomial::from_i64(&ring, 1);
    for _ in 0..omega {
        power = (&power * &minus_r).truncate(omega);
        inverse = &inverse + &power;
    }
    let inverse = inverse.scale(&(BigRational::one() / &a));

    let affine: Vec<(usize, QPoly)> = centered
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != denominator)
        .map(|(i, c)| (i, without_constant(&(c * &inverse).truncate(omega))))
        .collect();

    let lin: Vec<[BigRational; 2]> = affine.iter().map(|(_, f)| linear_coeffs(f)).collect();
    let det = |i: usize, j: usize| &lin[i][0] * &lin[j][1] - &lin[i][1] * &lin[j][0];
    let (pa, pb) = (0..affine.len())
        .flat_map(|i| (i + 1..affine.len()).map(move |j| (i, j)))
        .find(|&(i, j)| !det(i, j).is_zero())
        .ok_or_else(|| ProjectorError::NotImmersive("linear parts have rank < 2".into()))?;

    // invert (F_a, F_b) = A (s, t) + H(s, t) as Ψ = A⁻¹ (u − H(Ψ))
    let d = det(pa, pb);
    let inv = [
        [&lin[pb][1] / &d, -&lin[pa][1] / &d],
        [-&lin[pb][0] / &d, &lin[pa][0] / &d],
    ];
    let higher = |k: usize| &affine[k].1 - &linear(&ring, &lin[k][0], &lin[k][1]);
    let (ha, hb) = (higher(pa), higher(pb));
    let u = [Polynomial::var(&ring, 0), Polynomial::var(&ring, 1)];
    let mut psi = [linear(&ring, &inv[0][0], &inv[0][1]), linear(&ring, &inv[1][0], &inv[1][1])];
    for _ in 0..omega {
        let rhs = [&u[0] - &compose(&ha, &psi, omega), &u[1] - &compose(&hb, &psi, omega)];
        psi = [
            &rhs[0].scale(&inv[0][0]) + &rhs[1].scale(&inv[0][1]),
            &rhs[0].scale(&inv[1][0]) + &rhs[1].scale(&inv[1][1]),
        ];
    }

    let mut g = Vec::new();
    for (k, (_, f)) in affine.iter().enumerate() {
        if k == pa || k == pb {
            continue;
        }
        let composed = compose(f, &psi, omega);
        let [cs, ct] = linear_coeffs(&composed);
        let gj = &composed - &linear(&ring, &cs, &ct);
        if gj.low_degree().is_some_and(|d| d < 2) {
            return Err(ProjectorError::NormalizationContract(format!("g = {gj} is not in m^2")));
        }
        g.push(gj);
    }
    Ok(JetChart {
        point: x.clone(),
        omega,
        denominator,
        parameters: (affine[pa].0, affine[pb].0),
        g,
    })
}

/// Rank profile of the blown-up map along the exceptional curve `E = {t = 0}`.
#[derive(Clone, Debug)]
pub struct ExceptionalRank {
    /// `hⱼ(t, u) = gⱼ(tu, t) / t²`, in the ring `ℚ[t, u]`.
    pub h: Vec<Polynomial<Rationals>>,
    /// `hⱼ(0, u)` in `ℚ[u]`.
    pub h_on_e: Vec<Polynomial<Rationals>>,
    /// Rows of the Jacobian of `(u, t·h₃, …, t·h_N)` in `(∂ᵤ, ∂ₜ)` at `t = 0`, in `ℚ[u]`.
    pub derivative: Vec<[Polynomial<Rationals>; 2]>,
    pub ramified_along_e: bool,
    /// Points of `E` (with multiplicity) where the rank drops to 1; `None` when ramified along all of `E`.
    pub drop_points: Option<usize>,
}

impl ExceptionalRank {
    pub fn max_u_degree(&self) -> u32 {
        self.h_on_e.iter().filter_map(|h| h.total_degree()).max().unwrap_or(0)
    }
}

/// Substitutes `s = tu`, divides by `t²`, and reads off the derivative matrix along `t = 0`.
pub fn exceptional_rank(jets: &JetChart) -> Result<ExceptionalRank, ProjectorError> {
    let tu = Ring::new(&["t", "u"], Rationals, MonomialOrder::DegRevLex);
    let line = Ring::new(&["u"], Rationals, MonomialOrder::DegRevLex);
    let t = Polynomial::var(&tu, 0);
    let u = Polynomial::var(&tu, 1);
    let images = [&t * &u, t.clone()];
    let restrict = |p: &QPoly| -> QPoly {
        let terms = p
            .terms()
            .iter()
            .filter(|(m, _)| m.exps()[0] == 0)
            .map(|(m, c)| (Monomial::from_exponents(&[m.exps()[1]]), c.clone()))
            .collect();
        Polynomial::from_terms(&line, terms)
    };

    let mut h = Vec::new();
    for g in &jets.g {
        let sub = g.substitute(&images);
        let mut terms = Vec::with_capacity(sub.len());
        for (m, c) in sub.terms() {
            let [et, eu] = [m.exps()[0], m.exps()[1]];
            if et < 2 {
                return Err(ProjectorError::NormalizationContract(format!("{g} is not divisible by t^2 after s = tu")));
            }
            terms.push((Monomial::from_exponents(&[et - 2, eu]), c.clone()));
        }
        h.push(Polynomial::from_terms(&tu, terms));
    }

    let mut derivative = vec![[Polynomial::from_i64(&line, 1), Polynomial::zero(&line)]];
    for hj in &h {
        let du = &t * &hj.derivative(1);
        let dt = hj + &(&t * &hj.derivative(0));
        derivative.push([restrict(&du), restrict(&dt)]);
    }
    let h_on_e: Vec<QPoly> = h.iter().map(restrict).collect();
    let ramified_along_e = h_on_e.iter().all(|p| p.is_zero());
    let drop_points = if ramified_along_e {
        None
    } else {
        let ideal = Ideal::new(&line, h_on_e.clone())?.buchberger(MonomialOrder::DegRevLex, &GroebnerBudget::default())?;
        Some(ideal.quotient_length()?)
    };
    Ok(ExceptionalRank {
        h,
        h_on_e,
        derivative,
        ramified_along_e,
        drop_points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{del_pezzo, plane, scroll, veronese};

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn veronese_origin_is_normal() {
        let (_, p) = veronese().unwrap();
        let j = jet_normalize(&p, &[q(0), q(0)], 4).unwrap();
        let text: Vec<String> = j.coordinates().iter().map(|c| c.to_string()).collect();
        assert_eq!(text, ["1", "s", "t", "s^2", "s*t", "t^2"]);
        let r = exceptional_rank(&j).unwrap();
        assert!(!r.ramified_along_e);
        let on_e: Vec<String> = r.h_on_e.iter().map(|c| c.to_string()).collect();
        assert_eq!(on_e, ["u^2", "u", "1"]);
        assert_eq!(r.drop_points, Some(0));
    }

    #[test]
    fn plane_is_ramified_along_e() {
        let p = plane(5).unwrap();
        let j = jet_normalize(&p, &[q(3), q(-2)], 4).unwrap();
        assert!(j.g.iter().all(|g| g.is_zero()));
        assert!(j.in_m3());
        let r = exceptional_rank(&j).unwrap();
        assert!(r.ramified_along_e);
        assert_eq!(r.drop_points, None);
    }

    #[test]
    fn scroll_jets_at_random_points() {
        let (_, p) = scroll(1, 2).unwrap();
        for seed in 0..5 {
            let x = random_chart_point(&p, seed).unwrap();
            let j = jet_normalize(&p, &[q(x[0]), q(x[1])], 4).unwrap();
            assert!(j.g.iter().all(|g| g.low_degree().is_none_or(|d| d >= 2)));
            let r = exceptional_rank(&j).unwrap();
            assert!(!r.ramified_along_e);
            assert!(r.max_u_degree() <= 2);
        }
    }

    #[test]
    fn del_pezzo_jets() {
        let (_, p) = del_pezzo(6, 4).unwrap();
        let x = random_chart_point(&p, 9).unwrap();
        let j = jet_normalize(&p, &[q(x[0]), q(x[1])], 4).unwrap();
        assert_eq!(j.g.len(), 6 - 2);
        assert!(!exceptional_rank(&j).unwrap().ramified_along_e);
    }

    #[test]
    fn contract_violations() {
        let ring = chart_ring();
        let s = Polynomial::var(&ring, 0);
        let bad = JetChart {
            point: [q(0), q(0)],
            omega: 4,
            denominator: 0,
            parameters: (1, 2),
            g: vec![s],
        };
        assert!(matches!(exceptional_rank(&bad), Err(ProjectorError::NormalizationContract(_))));
        let (_, p) = veronese().unwrap();
        assert!(jet_normalize(&p, &[q(0), q(0)], 2).is_err());
    }
}
