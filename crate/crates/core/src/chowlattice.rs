//! Intersection theory on Picard-lattice models of surfaces.
//!
//! A [`SurfaceModel`] stores the intersection form on a lattice of divisor
//! classes together with the canonical class `K`, the hyperplane class `ζ`,
//! the topological Euler characteristic `c₂` and the ambient dimension `N`.
//! Everything the pinch-point count needs is an intersection number, so the
//! whole module is integer arithmetic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("intersection matrix is not square of size {0}")]
    NotSquare(usize),
    #[error("intersection matrix is not symmetric")]
    NotSymmetric,
    #[error("{field} has length {got}, lattice rank is {rank}")]
    LengthMismatch { field: &'static str, got: usize, rank: usize },
    #[error("hyperplane class has non-positive degree {0}")]
    NonPositiveDegree(i64),
    #[error("degree {degree} is below the minimal degree N-1 = {} of a non-degenerate surface", .ambient - 1)]
    BelowMinimalDegree { degree: i64, ambient: i64 },
    #[error("Noether divisibility fails: K^2 + c2 = {0} is not divisible by 12")]
    Noether(i64),
    #[error("ambient dimension {0} is below 3")]
    AmbientTooSmall(i64),
    #[error("scroll flag requires the ruled flag and a recorded genus")]
    ScrollFlags,
    #[error("genus {0} is negative")]
    NegativeGenus(i64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("model inconsistency: {0}")]
    Inconsistent(String),
    #[error("pinch number minus 2N-6 is odd ({0})")]
    Parity(i64),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("no integer hyperplane class of degree {requested} with twist {twist}; nearest representable degree is {nearest}")]
    NoIntegerSolution { requested: i64, twist: i64, nearest: i64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFlags {
    /// Image of a finitely ramified, birational map onto a non-degenerate surface.
    pub uncrumpled: bool,
    pub ruled: bool,
    /// Rational normal scroll.
    pub scroll: bool,
}

/// Raw lattice data of a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    pub form: Vec<Vec<i64>>,
    pub canonical: Vec<i64>,
    pub hyperplane: Vec<i64>,
    pub c2: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceModel {
    name: String,
    lattice: Lattice,
    ambient: i64,
    flags: ModelFlags,
    genus: Option<i64>,
}

/// Coefficients of the Gauss class on the dual Schubert basis `(σ₁₁*, σ₂*)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussClass {
    pub gamma11: i64,
    pub gamma2: i64,
    pub ambient: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    MinimalScroll,
    Ruled,
    Veronese,
    DelPezzo,
    Generic,
    /// Not flagged uncrumpled; the bound and its classification do not apply.
    OutsideHypotheses,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::MinimalScroll => "minimal-scroll",
            Branch::Ruled => "ruled",
            Branch::Veronese => "veronese",
            Branch::DelPezzo => "del-pezzo",
            Branch::Generic => "generic",
            Branch::OutsideHypotheses => "outside-hypotheses",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    /// `i` in `𝔓 = 2N − 6 + 2i`.
    pub excess: i64,
    pub branch: Branch,
    /// For ruled models: whether the base genus satisfies `g ≤ i/2`.
    pub genus_bound: Option<bool>,
}

impl SurfaceModel {
    pub fn new(
        name: impl Into<String>,
        lattice: Lattice,
        ambient: i64,
        flags: ModelFlags,
        genus: Option<i64>,
    ) -> Result<Self, ModelError> {
        let model = SurfaceModel {
            name: name.into(),
            lattice,
            ambient,
            flags,
            genus,
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<(), ModelError> {
        let r = self.rank();
        let l = &self.lattice;
        if l.form.iter().any(|row| row.len() != r) {
            return Err(ModelError::NotSquare(r));
        }
        for i in 0..r {
            for j in 0..i {
                if l.form[i][j] != l.form[j][i] {
                    return Err(ModelError::NotSymmetric);
                }
            }
        }
        for (field, v) in [("canonical", &l.canonical), ("hyperplane", &l.hyperplane)] {
            if v.len() != r {
                return Err(ModelError::LengthMismatch { field, got: v.len(), rank: r });
            }
        }
        if self.ambient < 3 {
            return Err(ModelError::AmbientTooSmall(self.ambient));
        }
        let d = self.degree();
        if d < 1 {
            return Err(ModelError::NonPositiveDegree(d));
        }
        let noether = self.k_squared() + l.c2;
        if noether.rem_euclid(12) != 0 {
            return Err(ModelError::Noether(noether));
        }
        if self.flags.uncrumpled && d < self.ambient - 1 {
            return Err(ModelError::BelowMinimalDegree { degree: d, ambient: self.ambient });
        }
        if self.flags.scroll && (!self.flags.ruled || self.genus.is_none()) {
            return Err(ModelError::ScrollFlags);
        }
        if let Some(g) = self.genus {
            if g < 0 {
                return Err(ModelError::NegativeGenus(g));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.form.len()
    }

    pub fn ambient(&self) -> i64 {
        self.ambient
    }

    pub fn flags(&self) -> ModelFlags {
        self.flags
    }

    pub fn genus(&self) -> Option<i64> {
        self.genus
    }

    pub fn c2(&self) -> i64 {
        self.lattice.c2
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Re-asserts (or clears) the uncrumpled flag, re-running validation.
    pub fn with_uncrumpled(mut self, uncrumpled: bool) -> Result<Self, ModelError> {
        self.flags.uncrumpled = uncrumpled;
        self.validate()?;
        Ok(self)
    }

    pub fn intersect(&self, a: &[i64], b: &[i64]) -> i64 {
        let q = &self.lattice.form;
        let mut acc = 0i64;
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                acc += ai * q[i][j] * bj;
            }
        }
        acc
    }

    /// `ζ²`, the degree of the image surface.
    pub fn degree(&self) -> i64 {
        self.intersect(&self.lattice.hyperplane, &self.lattice.hyperplane)
    }

    pub fn k_squared(&self) -> i64 {
        self.intersect(&self.lattice.canonical, &self.lattice.canonical)
    }

    /// `ζ·K`.
    pub fn zeta_k(&self) -> i64 {
        self.intersect(&self.lattice.hyperplane, &self.lattice.canonical)
    }

    /// `𝔓 = 6ζ² + 4ζK + K² − c₂`.
    pub fn pinch_number(&self) -> i64 {
        6 * self.degree() + 4 * self.zeta_k() + self.k_squared() - self.lattice.c2
    }

    /// Degree of the dual variety, `γ₂ = 3ζ² + 2ζK + c₂` (the second Chern class of
    /// the first principal-parts bundle of the hyperplane bundle).
    pub fn class_degree(&self) -> i64 {
        3 * self.degree() + 2 * self.zeta_k() + self.lattice.c2
    }

    /// The lower bound `2N − 6`.
    pub fn bound(&self) -> i64 {
        2 * self.ambient - 6
    }

    pub fn gauss_class(&self) -> Result<GaussClass, ModelError> {
        let gc = GaussClass {
            gamma11: self.pinch_number(),
            gamma2: self.class_degree(),
            ambient: self.ambient,
        };
        if gc.gamma11.rem_euclid(2) != 0 {
            return Err(ModelError::Inconsistent(format!("γ11 = {} is odd", gc.gamma11)));
        }
        if self.flags.uncrumpled {
            if gc.gamma11 < self.bound() {
                return Err(ModelError::Inconsistent(format!(
                    "γ11 = {} is below 2N-6 = {}",
                    gc.gamma11,
                    self.bound()
                )));
            }
            if gc.gamma2 < self.ambient - 2 {
                return Err(ModelError::Inconsistent(format!(
                    "γ2 = {} is below N-2 = {}",
                    gc.gamma2,
                    self.ambient - 2
                )));
            }
        }
        Ok(gc)
    }

    /// Blows up `k` points: appends `k` orthogonal `(−1)`-classes, `K ↦ β*K + ΣEᵢ`,
    /// `ζ ↦ β*ζ`, `c₂ ↦ c₂ + k`. Structural flags are cleared.
    pub fn blow_up(&self, k: usize) -> Result<SurfaceModel, ModelError> {
        if k == 0 {
            return Err(ModelError::InvalidArgument("blow-up needs at least one point".into()));
        }
        let r = self.rank();
        let n = r + k;
        let mut form = vec![vec![0i64; n]; n];
        for i in 0..r {
            form[i][..r].copy_from_slice(&self.lattice.form[i]);
        }
        for e in r..n {
            form[e][e] = -1;
        }
        let mut canonical = self.lattice.canonical.clone();
        canonical.extend(std::iter::repeat_n(1, k));
        let mut hyperplane = self.lattice.hyperplane.clone();
        hyperplane.extend(std::iter::repeat_n(0, k));
        SurfaceModel::new(
            format!("{}+bl{}", self.name, k),
            Lattice {
                form,
                canonical,
                hyperplane,
                c2: self.lattice.c2 + k as i64,
            },
            self.ambient,
            ModelFlags::default(),
            None,
        )
    }

    /// Resolved inner projection from a general point: blow up once, `ζ̃ = β*ζ − E`,
    /// `N ↦ N − 1`. The result carries no flags; re-assert them with
    /// [`SurfaceModel::with_uncrumpled`] when the geometry warrants it.
    pub fn inner_projection_model(&self) -> Result<SurfaceModel, ModelError> {
        if self.ambient <= 3 {
            return Err(ModelError::InvalidArgument(format!(
                "inner projection needs N >= 4, got N = {}",
                self.ambient
            )));
        }
        let blown = self.blow_up(1)?;
        let mut lattice = blown.lattice;
        *lattice.hyperplane.last_mut().unwrap() = -1;
        let out = SurfaceModel::new(
            format!("{}~inner", self.name),
            lattice,
            self.ambient - 1,
            ModelFlags::default(),
            None,
        )?;
        if out.pinch_number() != self.pinch_number() - 4 || out.degree() != self.degree() - 1 {
            return Err(ModelError::Inconsistent(format!(
                "inner projection changed (𝔓, deg) from ({}, {}) to ({}, {})",
                self.pinch_number(),
                self.degree(),
                out.pinch_number(),
                out.degree()
            )));
        }
        Ok(out)
    }

    /// Places the model in the near-minimal classification `𝔓 = 2N − 6 + 2i`.
    pub fn classify(&self) -> Result<Classification, ModelError> {
        let diff = self.pinch_number() - self.bound();
        if diff.rem_euclid(2) != 0 {
            return Err(ModelError::Parity(diff));
        }
        let i = diff / 2;
        let done = |branch, genus_bound| Ok(Classification { excess: i, branch, genus_bound });
        if !self.flags.uncrumpled {
            return done(Branch::OutsideHypotheses, None);
        }
        if i < 0 {
            return Err(ModelError::TheoremViolation(format!(
                "𝔓 = {} is below 2N-6 = {}",
                self.pinch_number(),
                self.bound()
            )));
        }
        // the equality classification is false in P^3 (every smooth surface attains 0)
        if self.ambient == 3 {
            return done(if self.flags.scroll { Branch::MinimalScroll } else { Branch::Generic }, None);
        }
        if i == 0 {
            if self.flags.scroll {
                return done(Branch::MinimalScroll, None);
            }
            return Err(ModelError::TheoremViolation(format!(
                "{} attains 𝔓 = 2N-6 but is not a rational normal scroll",
                self.name
            )));
        }
        if self.flags.scroll {
            return Err(ModelError::TheoremViolation(format!(
                "rational normal scroll {} has 𝔓 above 2N-6",
                self.name
            )));
        }
        if self.flags.ruled {
            let g = self.genus.unwrap_or(0);
            return done(Branch::Ruled, Some(2 * g <= i));
        }
        if self.ambient < 3 + i {
            return done(Branch::Generic, None);
        }
        let n = self.ambient;
        if n == 5 && i == 1 {
            if self.degree() != 4 || self.k_squared() != 9 {
                return Err(ModelError::TheoremViolation(format!(
                    "{} has (N, i) = (5, 1) but not the Veronese invariants",
                    self.name
                )));
            }
            return done(Branch::Veronese, None);
        }
        if i == n - 3 && (4..=9).contains(&n) {
            let anticanonical = self
                .lattice
                .hyperplane
                .iter()
                .zip(&self.lattice.canonical)
                .all(|(z, k)| *z == -k);
            if self.degree() != n || !anticanonical {
                return Err(ModelError::TheoremViolation(format!(
                    "{} has i = N-3 but is not an anticanonical del Pezzo of degree N",
                    self.name
                )));
            }
            return done(Branch::DelPezzo, None);
        }
        Err(ModelError::TheoremViolation(format!(
            "non-ruled {} has 𝔓 = 2N-6+2i with N = {n} >= 3+i = {} but is neither Veronese nor del Pezzo",
            self.name,
            3 + i
        )))
    }
}

/// Ramification count `γ₁ = 2d + 2g − 2` of a general projection of a curve to a line.
pub fn curve_gauss_coefficient(degree: i64, genus: i64) -> Result<i64, ModelError> {
    if degree < 1 || genus < 0 {
        return Err(ModelError::InvalidArgument(format!("need d >= 1, g >= 0 (got {degree}, {genus})")));
    }
    Ok(2 * degree + 2 * genus - 2)
}

/// Closed form of the pinch number of a surface ruled by lines: `2d + 4g − 4`.
pub fn ruled_pinch(degree: i64, genus: i64) -> Result<i64, ModelError> {
    if degree < 1 || genus < 0 {
        return Err(ModelError::InvalidArgument(format!("need d >= 1, g >= 0 (got {degree}, {genus})")));
    }
    Ok(2 * degree + 4 * genus - 4)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(zeta: i64, ambient: i64) -> SurfaceModel {
        SurfaceModel::new(
            "P2",
            Lattice { form: vec![vec![1]], canonical: vec![-3], hyperplane: vec![zeta], c2: 3 },
            ambient,
            ModelFlags { uncrumpled: true, ..Default::default() },
            None,
        )
        .unwrap()
    }

    fn quadric() -> SurfaceModel {
        SurfaceModel::new(
            "quadric",
            Lattice {
                form: vec![vec![0, 1], vec![1, 0]],
                canonical: vec![-2, -2],
                hyperplane: vec![1, 1],
                c2: 4,
            },
            3,
            ModelFlags { uncrumpled: true, ruled: true, scroll: true },
            Some(0),
        )
        .unwrap()
    }

    fn cubic_scroll() -> SurfaceModel {
        // F1 in the basis (C0, f): C0^2 = -1, C0.f = 1, f^2 = 0
        SurfaceModel::new(
            "S(1,2)",
            Lattice {
                form: vec![vec![-1, 1], vec![1, 0]],
                canonical: vec![-2, -3],
                hyperplane: vec![1, 2],
                c2: 4,
            },
            4,
            ModelFlags { uncrumpled: true, ruled: true, scroll: true },
            Some(0),
        )
        .unwrap()
    }

    #[test]
    fn pinch_numbers() {
        assert_eq!(plane(2, 5).pinch_number(), 6);
        assert_eq!(quadric().pinch_number(), 0);
        assert_eq!(cubic_scroll().pinch_number(), 2);
    }

    #[test]
    fn class_degrees() {
        let v = plane(2, 5);
        assert_eq!(v.class_degree(), 3);
        assert_eq!(v.class_degree(), v.degree() - 1);
        let s = cubic_scroll();
        assert_eq!(s.class_degree(), 3);
        assert_eq!(s.class_degree(), s.degree());
        assert_eq!(quadric().class_degree(), 2);
    }

    #[test]
    fn gauss_classes() {
        let g = plane(2, 5).gauss_class().unwrap();
        assert_eq!((g.gamma11, g.gamma2), (6, 3));
        let g = cubic_scroll().gauss_class().unwrap();
        assert_eq!((g.gamma11, g.gamma2), (2, 3));
    }

    #[test]
    fn gauss_class_rejects_uncrumpled_below_bound() {
        // a plane conic surface claimed to live in P^9: degree 4 < N - 1 is caught at construction
        let bad = SurfaceModel::new(
            "fake",
            Lattice { form: vec![vec![1]], canonical: vec![-3], hyperplane: vec![2], c2: 3 },
            9,
            ModelFlags { uncrumpled: true, ..Default::default() },
            None,
        );
        assert!(matches!(bad, Err(ModelError::BelowMinimalDegree { .. })));
        // N = 5 Veronese data with the cubic Veronese degree: fine; P^2 with ζ = h in P^3 is not
        let flat = SurfaceModel::new(
            "plane-in-P3",
            Lattice { form: vec![vec![1]], canonical: vec![-3], hyperplane: vec![1], c2: 3 },
            3,
            ModelFlags { uncrumpled: false, ..Default::default() },
            None,
        )
        .unwrap();
        assert_eq!(flat.pinch_number(), 6 - 12 + 9 - 3);
        let flagged = flat.clone().with_uncrumpled(true);
        assert!(matches!(flagged, Err(ModelError::BelowMinimalDegree { .. })));
    }

    #[test]
    fn curve_coefficients() {
        for n in 2..=10 {
            assert_eq!(curve_gauss_coefficient(n, 0).unwrap(), 2 * n - 2);
        }
        assert_eq!(curve_gauss_coefficient(2, 0).unwrap(), 2);
        assert_eq!(curve_gauss_coefficient(5, 1).unwrap(), 10);
        assert!(curve_gauss_coefficient(0, 0).is_err());
    }

    #[test]
    fn ruled_closed_form() {
        for n in 4..12 {
            assert_eq!(ruled_pinch(n - 1, 0).unwrap(), 2 * n - 6);
        }
        assert_eq!(ruled_pinch(7, 1).unwrap(), 14);
        assert_eq!(ruled_pinch(1, 0).unwrap(), -2);
    }

    #[test]
    fn blow_up_rules() {
        let p2 = plane(3, 9);
        let b = p2.blow_up(1).unwrap();
        assert_eq!((b.k_squared(), b.c2()), (8, 4));
        assert_eq!(b.flags(), ModelFlags::default());
        let b6 = p2.blow_up(6).unwrap();
        assert_eq!((b6.k_squared(), b6.c2()), (3, 9));
        assert_eq!((b6.k_squared() + b6.c2()) % 12, 0);
        assert!(matches!(p2.blow_up(0), Err(ModelError::InvalidArgument(_))));
    }

    #[test]
    fn inner_projection_of_veronese() {
        let v = plane(2, 5);
        let w = v.inner_projection_model().unwrap();
        assert_eq!(w.pinch_number(), 2);
        assert_eq!(w.ambient(), 4);
        assert_eq!(w.degree(), 3);
        assert!(!w.flags().uncrumpled);
        assert_eq!(w.classify().unwrap().branch, Branch::OutsideHypotheses);
        assert!(quadric().inner_projection_model().is_err());
    }

    #[test]
    fn classify_cases() {
        let c = plane(2, 5).classify().unwrap();
        assert_eq!((c.branch, c.excess), (Branch::Veronese, 1));
        let c = cubic_scroll().classify().unwrap();
        assert_eq!((c.branch, c.excess), (Branch::MinimalScroll, 0));
        let c = quadric().classify().unwrap();
        assert_eq!((c.branch, c.excess), (Branch::MinimalScroll, 0));

        // quartic del Pezzo: P^2 blown up in 5 points, ζ = -K
        let dp4 = plane(3, 4).blow_up(5).unwrap();
        let mut lattice = dp4.lattice().clone();
        lattice.hyperplane = lattice.canonical.iter().map(|k| -k).collect();
        let dp4 = SurfaceModel::new("dP4", lattice, 4, ModelFlags { uncrumpled: true, ..Default::default() }, None)
            .unwrap();
        assert_eq!(dp4.pinch_number(), 4);
        let c = dp4.classify().unwrap();
        assert_eq!((c.branch, c.excess), (Branch::DelPezzo, 1));
    }

    #[test]
    fn classify_flags_contradictions() {
        // cubic scroll lattice without the scroll flag attains the bound: a theorem violation
        let s = cubic_scroll();
        let lying = SurfaceModel::new(
            "not-a-scroll",
            s.lattice().clone(),
            4,
            ModelFlags { uncrumpled: true, ..Default::default() },
            None,
        )
        .unwrap();
        assert!(matches!(lying.classify(), Err(ModelError::TheoremViolation(_))));
    }

    #[test]
    fn invalid_models_rejected() {
        let asym = SurfaceModel::new(
            "asym",
            Lattice { form: vec![vec![0, 1], vec![2, 0]], canonical: vec![-2, -2], hyperplane: vec![1, 1], c2: 4 },
            3,
            ModelFlags::default(),
            None,
        );
        assert_eq!(asym, Err(ModelError::NotSymmetric));
        let noether = SurfaceModel::new(
            "bad-c2",
            Lattice { form: vec![vec![1]], canonical: vec![-3], hyperplane: vec![2], c2: 4 },
            5,
            ModelFlags::default(),
            None,
        );
        assert_eq!(noether, Err(ModelError::Noether(13)));
        let scroll_only = SurfaceModel::new(
            "scroll-flag",
            cubic_scroll().lattice().clone(),
            4,
            ModelFlags { uncrumpled: true, ruled: false, scroll: true },
            Some(0),
        );
        assert_eq!(scroll_only, Err(ModelError::ScrollFlags));
    }
}
