//! Buchberger's algorithm with the normal selection strategy and the
//! Gebauer–Möller pair update (product and chain criteria).

use serde::{Deserialize, Serialize};

use super::field::Field;
use super::monomial::Monomial;
use super::poly::Polynomial;
use super::AlgError;

/// Resource caps for one Gröbner computation. Exceeding either is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerBudget {
    /// Maximum number of S-pairs reduced.
    pub max_pairs: usize,
    /// Maximum total degree of an S-pair lcm or of a new basis element.
    pub max_degree: u32,
}

impl Default for GroebnerBudget {
    fn default() -> Self {
        GroebnerBudget {
            max_pairs: 200_000,
            max_degree: 60,
        }
    }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
}

struct State<F: Field> {
    polys: Vec<Polynomial<F>>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<F: Field> State<F> {
    fn lm(&self, i: usize) -> &Monomial {
        self.polys[i].leading_monomial().expect("basis elements are nonzero")
    }

    fn active_polys(&self) -> Vec<Polynomial<F>> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(p, _)| p.clone())
            .collect()
    }

    fn insert(&mut self, h: Polynomial<F>) {
        let hi = self.polys.len();
        self.polys.push(h);
        self.active.push(true);
        let lm_h = self.lm(hi).clone();

        let candidates: Vec<(usize, Monomial)> = (0..hi)
            .filter(|&g| self.active[g])
            .map(|g| (g, lm_h.lcm(self.lm(g))))
            .collect();

        // chain criterion among the new pairs
        let mut kept: Vec<(usize, Monomial)> = Vec::new();
        for (k, (g, l)) in candidates.iter().enumerate() {
            let coprime = lm_h.is_coprime(self.lm(*g));
            let dominated = candidates[k + 1..]
                .iter()
                .chain(kept.iter())
                .any(|(_, l2)| l2.divides(l));
            if coprime || !dominated {
                kept.push((*g, l.clone()));
            }
        }
        // product criterion
        let fresh: Vec<Pair> = kept
            .into_iter()
            .filter(|(g, _)| !lm_h.is_coprime(self.lm(*g)))
            .map(|(g, lcm)| Pair { i: g, j: hi, lcm })
            .collect();

        // chain criterion against the old pairs
        let mut old = std::mem::take(&mut self.pairs);
        old.retain(|p| {
            !(lm_h.divides(&p.lcm)
                && lm_h.lcm(self.lm(p.i)) != p.lcm
                && lm_h.lcm(self.lm(p.j)) != p.lcm)
        });
        old.extend(fresh);
        self.pairs = old;

        for g in 0..hi {
            if self.active[g] && lm_h.divides(self.lm(g)) {
                self.active[g] = false;
            }
        }
    }

    fn s_polynomial(&self, pair: &Pair) -> Polynomial<F> {
        let field = self.polys[pair.i].field();
        let one = field.one();
        let a = self.lm(pair.i).quotient_of(&pair.lcm).unwrap();
        let b = self.lm(pair.j).quotient_of(&pair.lcm).unwrap();
        let fa = self.polys[pair.i].mul_term(&a, &one);
        let fb = self.polys[pair.j].mul_term(&b, &one);
        &fa - &fb
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`, in the ring order of the generators.
///
/// The result is auto-reduced, monic and sorted by decreasing leading monomial.
/// The empty vector is the basis of the zero ideal.
pub fn groebner_basis<F: Field>(
    gens: &[Polynomial<F>],
    budget: &GroebnerBudget,
) -> Result<Vec<Polynomial<F>>, AlgError> {
    if let Some(first) = gens.first() {
        for g in gens {
            first.check_ring(g)?;
        }
    }
    let mut st = State {
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for g in gens.iter().filter(|g| !g.is_zero()) {
        if g.total_degree().unwrap() > budget.max_degree {
            return Err(AlgError::BudgetExceeded(format!(
                "input degree {} above cap {}",
                g.total_degree().unwrap(),
                budget.max_degree
            )));
        }
        let reduced = g.remainder(&st.active_polys());
        if !reduced.is_zero() {
            st.insert(reduced.monic());
        }
    }

    let mut processed = 0usize;
    while !st.pairs.is_empty() {
        if st.polys.iter().zip(&st.active).any(|(p, &a)| a && p.is_constant()) {
            break;
        }
        let order = st.polys[0].ring().order();
        let best = (0..st.pairs.len())
            .min_by(|&a, &b| {
                order
                    .cmp(&st.pairs[a].lcm, &st.pairs[b].lcm)
                    .then((st.pairs[a].j, st.pairs[a].i).cmp(&(st.pairs[b].j, st.pairs[b].i)))
            })
            .unwrap();
        let pair = st.pairs.swap_remove(best);
        processed += 1;
        if processed > budget.max_pairs {
            return Err(AlgError::BudgetExceeded(format!(
                "more than {} S-pairs",
                budget.max_pairs
            )));
        }
        if pair.lcm.degree() > budget.max_degree {
            return Err(AlgError::BudgetExceeded(format!(
                "S-pair degree {} above cap {}",
                pair.lcm.degree(),
                budget.max_degree
            )));
        }
        let s = st.s_polynomial(&pair);
        let r = s.remainder(&st.active_polys());
        if !r.is_zero() {
            st.insert(r.monic());
        }
    }

    let minimal = st.active_polys();
    if let Some(unit) = minimal.iter().find(|p| p.is_constant()) {
        return Ok(vec![unit.monic()]);
    }
    let mut reduced: Vec<Polynomial<F>> = (0..minimal.len())
        .map(|k| {
            let others: Vec<Polynomial<F>> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, p)| p.clone())
                .collect();
            minimal[k].remainder(&others).monic()
        })
        .collect();
    if let Some(first) = reduced.first() {
        let order = first.ring().order();
        reduced.sort_by(|a, b| {
            order.cmp(b.leading_monomial().unwrap(), a.leading_monomial().unwrap())
        });
    }
    Ok(reduced)
}

/// Whether `basis` is a Gröbner basis: every S-polynomial reduces to zero.
pub fn is_groebner_basis<F: Field>(basis: &[Polynomial<F>]) -> bool {
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            let (Some(a), Some(b)) = (basis[i].leading_monomial(), basis[j].leading_monomial())
            else {
                continue;
            };
            let lcm = a.lcm(b);
            let field = basis[i].field();
            let ca = field.inv(basis[i].leading_coeff().unwrap()).unwrap();
            let cb = field.inv(basis[j].leading_coeff().unwrap()).unwrap();
            let s = &basis[i].mul_term(&a.quotient_of(&lcm).unwrap(), &ca)
                - &basis[j].mul_term(&b.quotient_of(&lcm).unwrap(), &cb);
            if !s.remainder(basis).is_zero() {
                return false;
            }
        }
    }
    true
}
