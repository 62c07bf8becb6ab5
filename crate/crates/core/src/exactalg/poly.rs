//! Sparse multivariate polynomials.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::field::Field;
use super::monomial::{Monomial, MonomialOrder};
use super::AlgError;

/// Variable names, coefficient field and monomial order shared by a family of polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Ring<F: Field> {
    vars: Vec<String>,
    field: F,
    order: MonomialOrder,
}

impl<F: Field> Ring<F> {
    pub fn new<S: AsRef<str>>(vars: &[S], field: F, order: MonomialOrder) -> Arc<Self> {
        Arc::new(Ring {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            field,
            order,
        })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(Ring {
            vars: self.vars.clone(),
            field: self.field.clone(),
            order,
        })
    }

    /// Same variables and field, possibly a different order.
    pub fn compatible(&self, other: &Ring<F>) -> bool {
        self.vars == other.vars && self.field == other.field
    }
}

pub type Term<F> = (Monomial, <F as Field>::Elem);

#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<Ring<F>>,
    /// Nonzero terms, strictly decreasing in the ring's order.
    terms: Vec<Term<F>>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.compatible(&other.ring) && self.terms == other.terms
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Exact `a op b`, rejecting operands from different rings.
pub fn poly_arith<F: Field>(
    a: &Polynomial<F>,
    b: &Polynomial<F>,
    op: ArithOp,
) -> Result<Polynomial<F>, AlgError> {
    a.check_ring(b)?;
    Ok(match op {
        ArithOp::Add => a.add_same(b),
        ArithOp::Sub => a.sub_same(b),
        ArithOp::Mul => a.mul_same(b),
    })
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<Ring<F>>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring<F>>, c: F::Elem) -> Self {
        let n = ring.nvars();
        Self::from_terms(ring, vec![(Monomial::one(n), c)])
    }

    pub fn from_i64(ring: &Arc<Ring<F>>, c: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(c))
    }

    pub fn var(ring: &Arc<Ring<F>>, i: usize) -> Self {
        assert!(i < ring.nvars(), "variable index out of range");
        let one = ring.field().one();
        Self::from_terms(ring, vec![(Monomial::var(ring.nvars(), i, 1), one)])
    }

    pub fn monomial(ring: &Arc<Ring<F>>, m: Monomial, c: F::Elem) -> Self {
        Self::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(ring: &Arc<Ring<F>>, terms: Vec<Term<F>>) -> Self {
        let field = ring.field();
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "monomial arity differs from ring");
            match acc.get_mut(&m) {
                Some(e) => *e = field.add(e, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<Term<F>> = acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    /// Smallest total degree among the terms; `None` for the zero polynomial.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).min()
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field().zero())
    }

    pub fn same_ring(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring
    }

    pub(crate) fn check_ring(&self, other: &Self) -> Result<(), AlgError> {
        if self.same_ring(other) {
            Ok(())
        } else {
            Err(AlgError::RingMismatch)
        }
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let field = self.field();
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        let sign = |c: &F::Elem| if negate_other { field.neg(c) } else { c.clone() };
        while i < a.len() && j < b.len() {
            match order.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_other {
                        field.sub(&a[i].1, &b[j].1)
                    } else {
                        field.add(&a[i].1, &b[j].1)
                    };
                    if !field.is_zero(&c) {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub(crate) fn add_same(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub(crate) fn sub_same(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    pub(crate) fn mul_same(&self, other: &Self) -> Self {
        let field = self.field();
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), field.mul(ca, cb)));
            }
        }
        Self::from_terms(&self.ring, terms)
    }

    pub fn neg(&self) -> Self {
        let field = self.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let field = self.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), field.mul(a, c))).collect(),
        }
    }

    /// `c * m * self`; multiplying by a monomial preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        let field = self.field();
        if field.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), field.mul(a, c))).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::from_i64(&self.ring, 1);
        for _ in 0..k {
            acc = acc.mul_same(self);
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field().inv(lc).expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let field = self.field();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.0[var] > 0)
            .map(|(m, c)| {
                let mut d = m.clone();
                let e = d.0[var];
                d.0[var] -= 1;
                (d, field.mul(c, &field.from_i64(e as i64)))
            })
            .collect();
        Self::from_terms(&self.ring, terms)
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.ring.nvars());
        let field = self.field();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exps()) {
                for _ in 0..e {
                    t = field.mul(&t, x);
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; the result lives in the images' ring.
    pub fn substitute(&self, images: &[Polynomial<F>]) -> Polynomial<F> {
        assert_eq!(images.len(), self.ring.nvars(), "one image per variable");
        let target = images[0].ring().clone();
        let mut powers: Vec<Vec<Polynomial<F>>> = images
            .iter()
            .map(|p| vec![Polynomial::from_i64(&target, 1), p.clone()])
            .collect();
        let mut acc = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul_same(&images[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul_same(&powers[i][e as usize]);
                }
            }
            acc = acc.add_same(&t);
        }
        acc
    }

    /// Drops every term of total degree above `max_degree`.
    pub fn truncate(&self, max_degree: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= max_degree)
                .cloned()
                .collect(),
        }
    }

    /// Homogeneous component of the given total degree.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .cloned()
                .collect(),
        }
    }

    /// Re-expresses the polynomial in a ring with the same variables and field.
    pub fn to_ring(&self, ring: &Arc<Ring<F>>) -> Result<Self, AlgError> {
        if !self.ring.compatible(ring) {
            return Err(AlgError::RingMismatch);
        }
        let mut terms = self.terms.clone();
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Ok(Polynomial {
            ring: ring.clone(),
            terms,
        })
    }

    /// Maps coefficients into another field over the same variables.
    pub fn map_field<G: Field>(
        &self,
        ring: &Arc<Ring<G>>,
        f: impl Fn(&F::Elem) -> Option<G::Elem>,
    ) -> Result<Polynomial<G>, AlgError> {
        if ring.nvars() != self.ring.nvars() {
            return Err(AlgError::RingMismatch);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            terms.push((m.clone(), f(c).ok_or(AlgError::NotInvertible)?));
        }
        Ok(Polynomial::from_terms(ring, terms))
    }

    /// Remainder of full reduction modulo `divisors` (generalized division).
    pub fn remainder(&self, divisors: &[Polynomial<F>]) -> Polynomial<F> {
        let field = self.field();
        let mut p = self.clone();
        let mut rem: Vec<Term<F>> = Vec::new();
        'outer: while let Some((lm, lc)) = p.terms.first().cloned() {
            for g in divisors {
                if let Some(glm) = g.leading_monomial() {
                    if let Some(q) = glm.quotient_of(&lm) {
                        let c = field
                            .div(&lc, g.leading_coeff().unwrap())
                            .expect("nonzero leading coefficient");
                        p = p.sub_same(&g.mul_term(&q, &c));
                        continue 'outer;
                    }
                }
            }
            rem.push(p.terms.remove(0));
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: rem,
        }
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

struct ElemDisplay<'a, F: Field>(&'a F, &'a F::Elem);

impl<F: Field> fmt::Display for ElemDisplay<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_elem(self.1, f)
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = field.is_negative_display(c);
            let abs = if negative { field.neg(c) } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let v = &self.ring.var_names()[i];
                    if e == 1 {
                        v.clone()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{}", ElemDisplay(field, &abs))?;
            } else {
                if !field.is_one(&abs) {
                    write!(f, "{}*", ElemDisplay(field, &abs))?;
                }
                write!(f, "{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl<F: Field> std::ops::$trait<&Polynomial<F>> for &Polynomial<F> {
            type Output = Polynomial<F>;
            /// Panics if the operands live in different rings; use [`poly_arith`] to get an error.
            fn $method(self, rhs: &Polynomial<F>) -> Polynomial<F> {
                assert!(self.same_ring(rhs), "polynomials from different rings");
                self.$inner(rhs)
            }
        }
        impl<F: Field> std::ops::$trait<Polynomial<F>> for Polynomial<F> {
            type Output = Polynomial<F>;
            fn $method(self, rhs: Polynomial<F>) -> Polynomial<F> {
                std::ops::$trait::$method(&self, &rhs)
            }
        }
    };
}

impl_binop!(Add, add, add_same);
impl_binop!(Sub, sub, sub_same);
impl_binop!(Mul, mul, mul_same);

impl<F: Field> std::ops::Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial::neg(self)
    }
}
