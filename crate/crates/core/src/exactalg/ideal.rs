//! Finitely generated ideals, their Gröbner bases, and invariants of the quotient ring.

use std::sync::Arc;

use super::field::Field;
use super::groebner::{groebner_basis, GroebnerBudget};
use super::linalg::{mat_mul, rank, Matrix};
use super::monomial::{Monomial, MonomialOrder};
use super::poly::{Polynomial, Ring};
use super::AlgError;

#[derive(Clone, Debug)]
pub struct Ideal<F: Field> {
    ring: Arc<Ring<F>>,
    generators: Vec<Polynomial<F>>,
    /// Reduced Gröbner basis with respect to `ring.order()`.
    basis: Option<Vec<Polynomial<F>>>,
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: &Arc<Ring<F>>, generators: Vec<Polynomial<F>>) -> Result<Self, AlgError> {
        let generators = generators
            .into_iter()
            .map(|g| g.to_ring(ring))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Ideal {
            ring: ring.clone(),
            generators,
            basis: None,
        })
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn basis(&self) -> Option<&[Polynomial<F>]> {
        self.basis.as_deref()
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    /// The same ideal with a cached reduced Gröbner basis under `order`.
    pub fn buchberger(&self, order: MonomialOrder, budget: &GroebnerBudget) -> Result<Self, AlgError> {
        let ring = if order == self.ring.order() {
            self.ring.clone()
        } else {
            self.ring.with_order(order)
        };
        let gens = self
            .generators
            .iter()
            .map(|g| g.to_ring(&ring))
            .collect::<Result<Vec<_>, _>>()?;
        let basis = groebner_basis(&gens, budget)?;
        Ok(Ideal {
            ring,
            generators: gens,
            basis: Some(basis),
        })
    }

    /// Gröbner basis under degrevlex with the default budget.
    pub fn groebner(&self) -> Result<Self, AlgError> {
        self.buchberger(MonomialOrder::DegRevLex, &GroebnerBudget::default())
    }

    fn require_basis(&self) -> Result<&[Polynomial<F>], AlgError> {
        self.basis.as_deref().ok_or(AlgError::MissingBasis)
    }

    fn leading_monomials(&self) -> Result<Vec<Monomial>, AlgError> {
        Ok(self
            .require_basis()?
            .iter()
            .map(|g| g.leading_monomial().unwrap().clone())
            .collect())
    }

    pub fn is_unit(&self) -> Result<bool, AlgError> {
        Ok(self.require_basis()?.iter().any(|g| g.is_constant()))
    }

    /// Krull dimension of the quotient ring (`None`-free: the unit ideal reports 0).
    ///
    /// Equals the largest set of variables containing the support of no leading monomial.
    pub fn quotient_dimension(&self) -> Result<usize, AlgError> {
        let lms = self.leading_monomials()?;
        let n = self.ring.nvars();
        assert!(n <= 16, "dimension search is exponential in the variable count");
        let masks: Vec<u64> = lms.iter().map(Monomial::support_mask).collect();
        let best = (0u64..1 << n)
            .filter(|&s| masks.iter().all(|&m| m & !s != 0))
            .map(|s| s.count_ones() as usize)
            .max()
            .unwrap_or(0);
        Ok(best)
    }

    /// Monomials outside the leading-term ideal, ascending in the ring order.
    pub fn standard_monomials(&self) -> Result<Vec<Monomial>, AlgError> {
        let lms = self.leading_monomials()?;
        let n = self.ring.nvars();
        if lms.iter().any(Monomial::is_one) {
            return Ok(Vec::new());
        }
        let mut bounds = vec![u32::MAX; n];
        for m in &lms {
            let support: Vec<usize> = (0..n).filter(|&i| m.0[i] > 0).collect();
            if let [i] = support[..] {
                bounds[i] = bounds[i].min(m.0[i]);
            }
        }
        if bounds.contains(&u32::MAX) {
            return Err(AlgError::PositiveDimensional(self.quotient_dimension()?));
        }
        let mut out = Vec::new();
        let mut exps = vec![0u32; n];
        loop {
            let m = Monomial::from_exponents(&exps);
            if !lms.iter().any(|l| l.divides(&m)) {
                out.push(m);
            }
            // odometer over the box
            let mut k = 0;
            loop {
                if k == n {
                    let order = self.ring.order();
                    out.sort_by(|a, b| order.cmp(a, b));
                    return Ok(out);
                }
                exps[k] += 1;
                if exps[k] < bounds[k] {
                    break;
                }
                exps[k] = 0;
                k += 1;
            }
        }
    }

    /// Vector-space dimension of the quotient ring; requires a zero-dimensional quotient.
    pub fn quotient_length(&self) -> Result<usize, AlgError> {
        Ok(self.standard_monomials()?.len())
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Result<Polynomial<F>, AlgError> {
        let f = f.to_ring(&self.ring)?;
        Ok(f.remainder(self.require_basis()?))
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool, AlgError> {
        Ok(self.normal_form(f)?.is_zero())
    }

    /// Matrix of multiplication by `f` on the quotient, in the standard-monomial basis
    /// (column `j` holds the normal form of `f * b_j`).
    pub fn multiplication_matrix(&self, f: &Polynomial<F>) -> Result<Matrix<F::Elem>, AlgError> {
        let basis = self.standard_monomials()?;
        let field = self.ring.field();
        let n = basis.len();
        let f = f.to_ring(&self.ring)?;
        let mut m = vec![vec![field.zero(); n]; n];
        for (j, b) in basis.iter().enumerate() {
            let prod = self.normal_form(&f.mul_term(b, &field.one()))?;
            for (mono, c) in prod.terms() {
                let i = basis
                    .binary_search_by(|x| self.ring.order().cmp(x, mono))
                    .expect("normal forms are supported on standard monomials");
                m[i][j] = c.clone();
            }
        }
        Ok(m)
    }

    /// Length of the quotient by the saturation `I : f^∞`, i.e. the part of the
    /// zero-dimensional scheme lying where `f` does not vanish.
    ///
    /// Computed as the stable rank of powers of the multiplication-by-`f` map.
    pub fn localized_length(&self, f: &Polynomial<F>) -> Result<usize, AlgError> {
        let m = self.multiplication_matrix(f)?;
        let n = m.len();
        if n == 0 {
            return Ok(0);
        }
        let field = self.ring.field();
        let mut power = m;
        let mut exponent = 1usize;
        while exponent < n {
            power = mat_mul(field, &power, &power);
            exponent *= 2;
        }
        Ok(rank(field, &power))
    }
}

/// The ideal of 2×2 minors of the 3×2 Jacobian of a map from the plane to 3-space.
pub fn jacobian_minors<F: Field>(polys: &[Polynomial<F>]) -> Result<Ideal<F>, AlgError> {
    if polys.len() != 3 {
        return Err(AlgError::Arity(format!("expected 3 polynomials, got {}", polys.len())));
    }
    let ring = polys[0].ring().clone();
    if ring.nvars() != 2 {
        return Err(AlgError::Arity(format!("expected 2 variables, got {}", ring.nvars())));
    }
    for p in polys {
        polys[0].check_ring(p)?;
    }
    let jac: Vec<[Polynomial<F>; 2]> = polys.iter().map(|p| [p.derivative(0), p.derivative(1)]).collect();
    let minors = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(a, b)| &(&jac[a][0] * &jac[b][1]) - &(&jac[a][1] * &jac[b][0]))
        .collect();
    Ideal::new(&ring, minors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::field::Rationals;
    use crate::exactalg::parse::parse_polynomial;

    fn ideal(gens: &[&str]) -> Ideal<Rationals> {
        let ring = Ring::new(&["x", "y"], Rationals, MonomialOrder::DegRevLex);
        let gens = gens.iter().map(|g| parse_polynomial(&ring, g).unwrap()).collect();
        Ideal::new(&ring, gens).unwrap()
    }

    #[test]
    fn coordinate_ideal() {
        let i = ideal(&["x", "y"]).groebner().unwrap();
        let names: Vec<String> = i.basis().unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["x", "y"]);
        assert_eq!(i.quotient_dimension().unwrap(), 0);
        assert_eq!(i.quotient_length().unwrap(), 1);
    }

    #[test]
    fn staircase_of_cusp_like_ideal() {
        // degrevlex: LT(y - x^2) = x^2, the basis is {x^2 - y, xy, y^2}
        let i = ideal(&["y - x^2", "x^3"]).groebner().unwrap();
        let sm: Vec<Vec<u32>> = i.standard_monomials().unwrap().iter().map(|m| m.exps().to_vec()).collect();
        assert_eq!(sm, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        // lex with y > x: LT(y - x^2) = y, so the staircase is {1, x, x^2}
        let ring = Ring::new(&["y", "x"], Rationals, MonomialOrder::Lex);
        let gens = ["y - x^2", "x^3"].iter().map(|g| parse_polynomial(&ring, g).unwrap()).collect();
        let i = Ideal::new(&ring, gens).unwrap().buchberger(MonomialOrder::Lex, &GroebnerBudget::default()).unwrap();
        let sm: Vec<Vec<u32>> = i.standard_monomials().unwrap().iter().map(|m| m.exps().to_vec()).collect();
        assert_eq!(sm, vec![vec![0, 0], vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn dimensions() {
        assert_eq!(ideal(&["x"]).groebner().unwrap().quotient_dimension().unwrap(), 1);
        assert_eq!(ideal(&[]).groebner().unwrap().quotient_dimension().unwrap(), 2);
        assert_eq!(ideal(&["0"]).groebner().unwrap().quotient_dimension().unwrap(), 2);
        let err = ideal(&["x"]).groebner().unwrap().quotient_length();
        assert!(matches!(err, Err(AlgError::PositiveDimensional(1))));
    }

    #[test]
    fn lengths() {
        assert_eq!(ideal(&["x^2", "y"]).groebner().unwrap().quotient_length().unwrap(), 2);
        assert_eq!(ideal(&["x^2 - y", "y^2 - x"]).groebner().unwrap().quotient_length().unwrap(), 4);
        assert_eq!(ideal(&["x + 1", "x"]).groebner().unwrap().quotient_length().unwrap(), 0);
    }

    #[test]
    fn missing_basis_is_reported() {
        assert!(matches!(ideal(&["x"]).quotient_dimension(), Err(AlgError::MissingBasis)));
    }

    #[test]
    fn localization_drops_points_on_the_curve() {
        // four simple points (x,y) with x^2 = y, y^2 = x: (0,0), (1,1) and two complex ones
        let i = ideal(&["x^2 - y", "y^2 - x"]).groebner().unwrap();
        let ring = i.ring().clone();
        let x = parse_polynomial(&ring, "x").unwrap();
        let xm1 = parse_polynomial(&ring, "x - 1").unwrap();
        assert_eq!(i.localized_length(&x).unwrap(), 3);
        assert_eq!(i.localized_length(&(&x * &xm1)).unwrap(), 2);
        // a fat point at the origin disappears entirely
        let fat = ideal(&["x^2", "y^3"]).groebner().unwrap();
        assert_eq!(fat.localized_length(&x).unwrap(), 0);
        let one = parse_polynomial(&ring, "1").unwrap();
        assert_eq!(fat.localized_length(&one).unwrap(), 6);
    }

    #[test]
    fn whitney_umbrella_minors() {
        let ring = Ring::new(&["s", "t"], Rationals, MonomialOrder::DegRevLex);
        let f: Vec<_> = ["s", "t^2", "s*t"].iter().map(|g| parse_polynomial(&ring, g).unwrap()).collect();
        let i = jacobian_minors(&f).unwrap();
        let minors: Vec<String> = i.generators().iter().map(|p| p.to_string()).collect();
        assert_eq!(minors, ["2*t", "s", "-2*t^2"]);
        let i = i.groebner().unwrap();
        assert_eq!(i.quotient_length().unwrap(), 1);
    }

    #[test]
    fn immersion_has_unit_minor_ideal() {
        let ring = Ring::new(&["s", "t"], Rationals, MonomialOrder::DegRevLex);
        let f: Vec<_> = ["s", "t", "0"].iter().map(|g| parse_polynomial(&ring, g).unwrap()).collect();
        let i = jacobian_minors(&f).unwrap().groebner().unwrap();
        assert!(i.is_unit().unwrap());
        assert_eq!(i.quotient_length().unwrap(), 0);
    }

    #[test]
    fn minors_arity_errors() {
        let ring = Ring::new(&["s", "t"], Rationals, MonomialOrder::DegRevLex);
        let s = Polynomial::var(&ring, 0);
        assert!(matches!(jacobian_minors(&[s.clone(), s.clone()]), Err(AlgError::Arity(_))));
        let ring3 = Ring::new(&["a", "b", "c"], Rationals, MonomialOrder::DegRevLex);
        let a = Polynomial::var(&ring3, 0);
        assert!(matches!(jacobian_minors(&[a.clone(), a.clone(), a]), Err(AlgError::Arity(_))));
    }
}
