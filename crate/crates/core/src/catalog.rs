//! The standard cast of surfaces, as lattice models and as explicit charts.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chowlattice::{Lattice, ModelError, ModelFlags, SurfaceModel};
use crate::exactalg::linalg::{nullspace, rank};
use crate::exactalg::{
    AlgError, Field, GroebnerBudget, Ideal, Monomial, MonomialOrder, Polynomial, PrimeField, Rationals,
    Ring, DEFAULT_PRIME,
};

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no base points in general position after {0} draws")]
    DegeneratePoints(usize),
    #[error("chart is not immersive at any of {0} test points")]
    NotImmersive(usize),
    #[error("chart coordinates share a common factor")]
    CommonFactor,
    #[error("descriptor line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("descriptor field `{field}`: {message}")]
    Field { field: &'static str, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("bad surface spec `{0}`; expected scroll:a,b | veronese | delpezzo:d | ruled:g,d | file:<path>")]
    Spec(String),
}

pub type QRing = Arc<Ring<Rationals>>;

/// The chart ring `ℚ[s, t]`.
pub fn chart_ring() -> QRing {
    Ring::new(&["s", "t"], Rationals, MonomialOrder::DegRevLex)
}

/// An affine chart `(s, t) ↦ [P₀ : … : P_N]` of a catalog surface.
#[derive(Clone, Debug)]
pub struct ParamSurface {
    name: String,
    coords: Vec<Polynomial<Rationals>>,
    model: SurfaceModel,
}

impl ParamSurface {
    pub fn new(model: SurfaceModel, coords: Vec<Polynomial<Rationals>>) -> Result<Self, CatalogError> {
        let n = model.ambient();
        if coords.len() as i64 != n + 1 {
            return Err(CatalogError::InvalidArgument(format!(
                "{} coordinates for ambient dimension {n}",
                coords.len()
            )));
        }
        let ring = coords[0].ring().clone();
        if ring.nvars() != 2 {
            return Err(CatalogError::InvalidArgument("chart must have two variables".into()));
        }
        for c in &coords {
            if !c.ring().compatible(&ring) {
                return Err(AlgError::RingMismatch.into());
            }
        }
        let surface = ParamSurface {
            name: model.name().to_string(),
            coords,
            model,
        };
        if !surface.coordinates_coprime()? {
            return Err(CatalogError::CommonFactor);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        const TRIES: usize = 16;
        let immersive = (0..TRIES).any(|_| {
            let x = [rng.gen_range(-20i64..=20), rng.gen_range(-20i64..=20)];
            surface.is_immersive_at(&x)
        });
        if !immersive {
            return Err(CatalogError::NotImmersive(TRIES));
        }
        Ok(surface)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ambient(&self) -> i64 {
        self.model.ambient()
    }

    pub fn coords(&self) -> &[Polynomial<Rationals>] {
        &self.coords
    }

    pub fn model(&self) -> &SurfaceModel {
        &self.model
    }

    pub fn expected_degree(&self) -> i64 {
        self.model.degree()
    }

    pub fn expected_pinch(&self) -> i64 {
        self.model.pinch_number()
    }

    /// No common curve component: the coordinates cut out a finite set.
    fn coordinates_coprime(&self) -> Result<bool, CatalogError> {
        let field = PrimeField::new(DEFAULT_PRIME)?;
        let ring = Ring::new(&["s", "t"], field, MonomialOrder::DegRevLex);
        let gens = self
            .coords
            .iter()
            .map(|c| c.map_field(&ring, |q| field.from_rational(q)))
            .collect::<Result<Vec<_>, _>>()?;
        let ideal = Ideal::new(&ring, gens)?.buchberger(MonomialOrder::DegRevLex, &GroebnerBudget::default())?;
        Ok(ideal.quotient_dimension()? == 0)
    }

    /// Whether `[P; ∂ₛP; ∂ₜP]` has rank 3 at the integer point `x`.
    pub fn is_immersive_at(&self, x: &[i64; 2]) -> bool {
        let pt = [BigRational::from_integer(x[0].into()), BigRational::from_integer(x[1].into())];
        let rows: Vec<Vec<BigRational>> = [None, Some(0), Some(1)]
            .iter()
            .map(|d| {
                self.coords
                    .iter()
                    .map(|c| match d {
                        None => c.evaluate(&pt),
                        Some(v) => c.derivative(*v).evaluate(&pt),
                    })
                    .collect()
            })
            .collect();
        rank(&Rationals, &rows) == 3
    }
}

fn flags(ruled: bool, scroll: bool) -> ModelFlags {
    ModelFlags {
        uncrumpled: true,
        ruled,
        scroll,
    }
}

fn mono(ring: &QRing, s: u32, t: u32, c: BigRational) -> Polynomial<Rationals> {
    Polynomial::monomial(ring, Monomial::from_exponents(&[s, t]), c)
}

/// Hirzebruch lattice `F_e` in the basis `(C₀, f)`.
fn hirzebruch(e: i64, hyperplane: Vec<i64>, c2: i64, canonical: Vec<i64>) -> Lattice {
    Lattice {
        form: vec![vec![-e, 1], vec![1, 0]],
        canonical,
        hyperplane,
        c2,
    }
}

/// Rational normal scroll `S(a, b)` on `F_{b−a}` with `ζ = C₀ + b f`.
pub fn scroll_model(a: i64, b: i64) -> Result<SurfaceModel, CatalogError> {
    if a < 1 || b < a {
        return Err(CatalogError::InvalidArgument(format!("scroll needs 1 <= a <= b, got ({a}, {b})")));
    }
    let e = b - a;
    let lattice = hirzebruch(e, vec![1, b], 4, vec![-2, -2 - e]);
    Ok(SurfaceModel::new(format!("scroll:{a},{b}"), lattice, a + b + 1, flags(true, true), Some(0))?)
}

/// `S(a, b)` with the chart `(s, t) ↦ [1 : s : … : sᵃ : t : ts : … : tsᵇ]`.
pub fn scroll(a: i64, b: i64) -> Result<(SurfaceModel, ParamSurface), CatalogError> {
    let model = scroll_model(a, b)?;
    let ring = chart_ring();
    let one = BigRational::one();
    let mut coords: Vec<_> = (0..=a as u32).map(|k| mono(&ring, k, 0, one.clone())).collect();
    coords.extend((0..=b as u32).map(|k| mono(&ring, k, 1, one.clone())));
    let param = ParamSurface::new(model.clone(), coords)?;
    Ok((model, param))
}

fn plane_lattice(zeta: i64) -> Lattice {
    Lattice {
        form: vec![vec![1]],
        canonical: vec![-3],
        hyperplane: vec![zeta],
        c2: 3,
    }
}

pub fn veronese_model() -> SurfaceModel {
    SurfaceModel::new("veronese", plane_lattice(2), 5, flags(false, false), None).expect("valid model")
}

/// The Veronese surface with the chart `(s, t) ↦ [1 : s : t : s² : st : t²]`.
pub fn veronese() -> Result<(SurfaceModel, ParamSurface), CatalogError> {
    let model = veronese_model();
    let ring = chart_ring();
    let coords = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
        .iter()
        .map(|&(i, j)| mono(&ring, i, j, BigRational::one()))
        .collect();
    let param = ParamSurface::new(model.clone(), coords)?;
    Ok((model, param))
}

/// A linearly embedded plane `(s, t) ↦ [1 : s : t : 0 : … : 0]` in `P^N`; degenerate, so unflagged.
pub fn plane(ambient: i64) -> Result<ParamSurface, CatalogError> {
    let model = SurfaceModel::new(format!("plane:{ambient}"), plane_lattice(1), ambient, ModelFlags::default(), None)?;
    let ring = chart_ring();
    let mut coords = vec![
        Polynomial::from_i64(&ring, 1),
        Polynomial::var(&ring, 0),
        Polynomial::var(&ring, 1),
    ];
    coords.resize(ambient as usize + 1, Polynomial::zero(&ring));
    ParamSurface::new(model, coords)
}

/// Anticanonical del Pezzo surface of degree `d`: `P²` blown up at `9 − d` general points.
pub fn del_pezzo_model(d: i64) -> Result<SurfaceModel, CatalogError> {
    if !(3..=9).contains(&d) {
        return Err(CatalogError::InvalidArgument(format!("del Pezzo degree must be in 3..=9, got {d}")));
    }
    let name = format!("delpezzo:{d}");
    let base = SurfaceModel::new(name.clone(), plane_lattice(3), d, ModelFlags::default(), None)?;
    let blown = if d == 9 { base } else { base.blow_up((9 - d) as usize)? };
    let mut lattice = blown.lattice().clone();
    lattice.hyperplane = lattice.canonical.iter().map(|k| -k).collect();
    Ok(SurfaceModel::new(name, lattice, d, flags(false, false), None)?)
}

const CUBICS: [(u32, u32); 10] = [(3, 0), (2, 1), (1, 2), (0, 3), (2, 0), (1, 1), (0, 2), (1, 0), (0, 1), (0, 0)];

fn pow_i(x: i64, e: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(x).pow(e))
}

fn general_position(points: &[[i64; 2]]) -> bool {
    let k = points.len();
    for i in 0..k {
        for j in i + 1..k {
            if points[i] == points[j] {
                return false;
            }
            for l in j + 1..k {
                let [a, b, c] = [points[i], points[j], points[l]];
                if (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) == 0 {
                    return false;
                }
            }
        }
    }
    if k == 6 {
        let conics: Vec<Vec<BigRational>> = points
            .iter()
            .map(|p| CUBICS[4..].iter().map(|&(i, j)| pow_i(p[0], i) * pow_i(p[1], j)).collect())
            .collect();
        if rank(&Rationals, &conics) < 6 {
            return false;
        }
    }
    true
}

/// Random base points with coordinates in `[−20, 20]`, resampled until in general position.
pub fn del_pezzo_points(d: i64, seed: u64) -> Result<Vec<[i64; 2]>, CatalogError> {
    const DRAWS: usize = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..DRAWS {
        let pts: Vec<[i64; 2]> = (0..9 - d)
            .map(|_| [rng.gen_range(-20..=20), rng.gen_range(-20..=20)])
            .collect();
        if general_position(&pts) {
            return Ok(pts);
        }
    }
    Err(CatalogError::DegeneratePoints(DRAWS))
}

/// Integer basis of the plane cubics through `points`, as polynomials in `(s, t)`.
pub fn cubics_through(points: &[[i64; 2]]) -> Vec<Polynomial<Rationals>> {
    let ring = chart_ring();
    let conditions: Vec<Vec<BigRational>> = points
        .iter()
        .map(|p| CUBICS.iter().map(|&(i, j)| pow_i(p[0], i) * pow_i(p[1], j)).collect())
        .collect();
    let kernel = if conditions.is_empty() {
        (0..10)
            .map(|i| (0..10).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
            .collect()
    } else {
        nullspace(&Rationals, &conditions, 10)
    };
    let mut basis: Vec<_> = kernel
        .into_iter()
        .map(|v| {
            let den = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            let ints: Vec<BigInt> = v.iter().map(|c| (c * &den).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
            let terms = CUBICS
                .iter()
                .zip(&ints)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&(i, j), c)| (Monomial::from_exponents(&[i, j]), BigRational::from_integer(c / &g)))
                .collect();
            Polynomial::from_terms(&ring, terms)
        })
        .collect();
    // constant-term-first reads most naturally for the no-base-point case
    basis.reverse();
    basis
}

/// del Pezzo surface of degree `d` with a chart given by the cubics through seeded random base points.
pub fn del_pezzo(d: i64, seed: u64) -> Result<(SurfaceModel, ParamSurface), CatalogError> {
    let model = del_pezzo_model(d)?;
    let points = del_pezzo_points(d, seed)?;
    let coords = cubics_through(&points);
    debug_assert_eq!(coords.len() as i64, d + 1);
    let param = ParamSurface::new(model.clone(), coords)?;
    Ok((model, param))
}

/// Ruled surface over a genus-`g` curve with a chosen twist `e`, in the basis `(η, F)`
/// with `η² = −e`, `F² = 0`, `η·F = 1`, `ζ = η + aF` of degree `d`, nominally in `P^{d+1}`.
pub fn ruled_model_with_twist(g: i64, d: i64, e: i64) -> Result<SurfaceModel, CatalogError> {
    if g < 0 || d < 3 {
        return Err(CatalogError::InvalidArgument(format!("ruled model needs g >= 0, d >= 3, got ({g}, {d})")));
    }
    if (d + e).rem_euclid(2) != 0 {
        return Err(ModelError::NoIntegerSolution { requested: d, twist: e, nearest: d + 1 }.into());
    }
    let a = (d + e) / 2;
    let lattice = hirzebruch(e, vec![1, a], 4 - 4 * g, vec![-2, 2 * g - 2 - e]);
    let fl = ModelFlags {
        uncrumpled: g == 0,
        ruled: true,
        scroll: g == 0,
    };
    Ok(SurfaceModel::new(format!("ruled:{g},{d}"), lattice, d + 1, fl, Some(g))?)
}

/// [`ruled_model_with_twist`] with the smallest twist `e ∈ {0, 1}` of the right parity.
pub fn ruled_model(g: i64, d: i64) -> Result<SurfaceModel, CatalogError> {
    ruled_model_with_twist(g, d, d.rem_euclid(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Scroll,
    Veronese,
    DelPezzo,
    Ruled,
    File,
}

impl FromStr for Family {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "scroll" | "scrolls" => Ok(Family::Scroll),
            "veronese" => Ok(Family::Veronese),
            "delpezzo" | "del-pezzo" | "delpezzos" => Ok(Family::DelPezzo),
            "ruled" => Ok(Family::Ruled),
            _ => Err(CatalogError::InvalidArgument(format!("unknown family `{s}`"))),
        }
    }
}

/// One-line surface specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurfaceSpec {
    Scroll(i64, i64),
    Veronese,
    DelPezzo(i64),
    Ruled(i64, i64),
    File(PathBuf),
}

impl FromStr for SurfaceSpec {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CatalogError::Spec(s.to_string());
        let ints = |args: &str| -> Result<Vec<i64>, CatalogError> {
            args.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect()
        };
        let (head, args) = match s.split_once(':') {
            Some((h, a)) => (h.trim(), Some(a)),
            None => (s.trim(), None),
        };
        match (head, args) {
            ("veronese", None) => Ok(SurfaceSpec::Veronese),
            ("scroll", Some(a)) => match ints(a)?[..] {
                [a, b] => Ok(SurfaceSpec::Scroll(a, b)),
                _ => Err(bad()),
            },
            ("delpezzo", Some(a)) => match ints(a)?[..] {
                [d] => Ok(SurfaceSpec::DelPezzo(d)),
                _ => Err(bad()),
            },
            ("ruled", Some(a)) => match ints(a)?[..] {
                [g, d] => Ok(SurfaceSpec::Ruled(g, d)),
                _ => Err(bad()),
            },
            ("file", Some(p)) if !p.is_empty() => Ok(SurfaceSpec::File(PathBuf::from(p))),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceSpec::Scroll(a, b) => write!(f, "scroll:{a},{b}"),
            SurfaceSpec::Veronese => write!(f, "veronese"),
            SurfaceSpec::DelPezzo(d) => write!(f, "delpezzo:{d}"),
            SurfaceSpec::Ruled(g, d) => write!(f, "ruled:{g},{d}"),
            SurfaceSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// A catalog surface: its lattice model, and how to build an explicit chart if one exists.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub spec: SurfaceSpec,
    pub family: Family,
    pub model: SurfaceModel,
    /// `b − a` for scrolls; reporting only.
    pub eccentricity: Option<i64>,
}

impl CatalogEntry {
    pub fn has_chart(&self) -> bool {
        matches!(self.family, Family::Scroll | Family::Veronese | Family::DelPezzo)
    }

    /// The explicit chart; `seed` only matters for del Pezzo base points.
    pub fn chart(&self, seed: u64) -> Result<Option<ParamSurface>, CatalogError> {
        Ok(match self.spec {
            SurfaceSpec::Scroll(a, b) => Some(scroll(a, b)?.1),
            SurfaceSpec::Veronese => Some(veronese()?.1),
            SurfaceSpec::DelPezzo(d) => Some(del_pezzo(d, seed)?.1),
            _ => None,
        })
    }
}

impl SurfaceSpec {
    pub fn resolve(&self) -> Result<CatalogEntry, CatalogError> {
        let (family, model, eccentricity) = match self {
            SurfaceSpec::Scroll(a, b) => (Family::Scroll, scroll_model(*a, *b)?, Some(b - a)),
            SurfaceSpec::Veronese => (Family::Veronese, veronese_model(), None),
            SurfaceSpec::DelPezzo(d) => (Family::DelPezzo, del_pezzo_model(*d)?, None),
            SurfaceSpec::Ruled(g, d) => (Family::Ruled, ruled_model(*g, *d)?, None),
            SurfaceSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CatalogError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                (Family::File, load_descriptor(&text)?, None)
            }
        };
        Ok(CatalogEntry {
            spec: self.clone(),
            family,
            model,
            eccentricity,
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CatalogFilter {
    pub max_n: Option<i64>,
    pub only: Option<Family>,
}

/// Default ambient cap: covers every scroll `S(a, b)` with `b ≤ 5`.
pub const DEFAULT_MAX_N: i64 = 11;

/// Scrolls, the Veronese surface and the del Pezzo surfaces with `N ≤ max_n`.
pub fn standard_catalog(filter: &CatalogFilter) -> Vec<CatalogEntry> {
    let max_n = filter.max_n.unwrap_or(DEFAULT_MAX_N);
    let mut specs = Vec::new();
    for a in 1.. {
        if 2 * a + 1 > max_n {
            break;
        }
        for b in a..=max_n - a - 1 {
            specs.push(SurfaceSpec::Scroll(a, b));
        }
    }
    if max_n >= 5 {
        specs.push(SurfaceSpec::Veronese);
    }
    for d in 3..=max_n.min(9) {
        specs.push(SurfaceSpec::DelPezzo(d));
    }
    specs
        .into_iter()
        .map(|s| s.resolve().expect("catalog constructors are valid"))
        .filter(|e| filter.only.is_none_or(|f| f == e.family))
        .collect()
}

/// Wire format of a [`SurfaceModel`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Descriptor {
    pub name: String,
    pub rank: usize,
    pub intersection_matrix: Vec<Vec<i64>>,
    pub canonical: Vec<i64>,
    pub hyperplane: Vec<i64>,
    pub c2: i64,
    pub ambient: i64,
    pub flags: DescriptorFlags,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorFlags {
    pub uncrumpled: bool,
    pub ruled: bool,
    pub scroll: bool,
}

impl From<&SurfaceModel> for Descriptor {
    fn from(m: &SurfaceModel) -> Self {
        let l = m.lattice();
        let f = m.flags();
        Descriptor {
            name: m.name().to_string(),
            rank: m.rank(),
            intersection_matrix: l.form.clone(),
            canonical: l.canonical.clone(),
            hyperplane: l.hyperplane.clone(),
            c2: l.c2,
            ambient: m.ambient(),
            flags: DescriptorFlags {
                uncrumpled: f.uncrumpled,
                ruled: f.ruled,
                scroll: f.scroll,
            },
            genus: m.genus(),
        }
    }
}

impl TryFrom<Descriptor> for SurfaceModel {
    type Error = CatalogError;

    fn try_from(d: Descriptor) -> Result<Self, CatalogError> {
        let field_err = |field, message: String| CatalogError::Field { field, message };
        if d.intersection_matrix.len() != d.rank {
            return Err(field_err(
                "intersection_matrix",
                format!("{} rows but rank is {}", d.intersection_matrix.len(), d.rank),
            ));
        }
        if let Some(row) = d.intersection_matrix.iter().position(|r| r.len() != d.rank) {
            return Err(field_err("intersection_matrix", format!("row {row} does not have {} entries", d.rank)));
        }
        let lattice = Lattice {
            form: d.intersection_matrix,
            canonical: d.canonical,
            hyperplane: d.hyperplane,
            c2: d.c2,
        };
        let flags = ModelFlags {
            uncrumpled: d.flags.uncrumpled,
            ruled: d.flags.ruled,
            scroll: d.flags.scroll,
        };
        SurfaceModel::new(d.name, lattice, d.ambient, flags, d.genus).map_err(|e| {
            let field = match &e {
                ModelError::NotSymmetric | ModelError::NotSquare(_) => "intersection_matrix",
                ModelError::LengthMismatch { field, .. } => field,
                ModelError::NonPositiveDegree(_) | ModelError::BelowMinimalDegree { .. } => "hyperplane",
                ModelError::Noether(_) => "c2",
                ModelError::AmbientTooSmall(_) => "ambient",
                ModelError::ScrollFlags => "flags",
                ModelError::NegativeGenus(_) => "genus",
                _ => return CatalogError::Model(e),
            };
            field_err(field, e.to_string())
        })
    }
}

pub fn load_descriptor(text: &str) -> Result<SurfaceModel, CatalogError> {
    let d: Descriptor = serde_json::from_str(text).map_err(|e| CatalogError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    d.try_into()
}

pub fn save_descriptor(model: &SurfaceModel) -> String {
    serde_json::to_string_pretty(&Descriptor::from(model)).expect("descriptor serializes")
}
