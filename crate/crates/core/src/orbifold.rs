//! Orbifold surfaces (a Riemann surface with cone points of integer
//! multiplicity) and orbibundles over them.
//!
//! ```json
//! {"genus": 0, "marks": [2, 3, 7], "bundle": {"e": -1, "local": [[2, 1], [3, 1], [7, 1]]}}
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::OrbifoldError;

/// Genus plus cone multiplicities `m_i ≥ 2`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OrbifoldDocument", into = "OrbifoldDocument")]
pub struct OrbifoldSurface {
    genus: u32,
    marks: Vec<u32>,
}

impl OrbifoldSurface {
    /// Multiplicity 1 marks are dropped; multiplicities < 1 are rejected.
    pub fn new(genus: u32, marks: &[i64]) -> Result<Self, OrbifoldError> {
        let mut kept = Vec::with_capacity(marks.len());
        for &m in marks {
            match m {
                ..=0 => return Err(OrbifoldError::BadMultiplicity(m)),
                1 => {}
                _ => kept.push(u32::try_from(m).map_err(|_| OrbifoldError::BadMultiplicity(m))?),
            }
        }
        kept.sort_unstable();
        Ok(OrbifoldSurface { genus, marks: kept })
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn marks(&self) -> &[u32] {
        &self.marks
    }

    /// `lcm(m_i)`, 1 without marks.
    pub fn lcm(&self) -> u64 {
        self.marks.iter().fold(1u64, |l, &m| l.lcm(&(m as u64)))
    }
}

impl fmt::Display for OrbifoldSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "genus {} marks {:?}", self.genus, self.marks)
    }
}

/// `χ_orb = 2 − 2g − Σ (1 − 1/m_i)`.
pub fn euler_characteristic(s: &OrbifoldSurface) -> BigRational {
    let mut chi = BigRational::from_integer(BigInt::from(2) - BigInt::from(2 * s.genus as u64));
    for &m in &s.marks {
        chi -= BigRational::one() - BigRational::new(1.into(), m.into());
    }
    chi
}

/// Good orbifolds by the sign of `χ_orb`; bad ones are the teardrops and
/// spindles `P¹(p, q)`, `p ≠ q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Geometry {
    Bad,
    Spherical,
    Euclidean,
    Hyperbolic,
}

pub fn classify_orbifold(s: &OrbifoldSurface) -> Geometry {
    if s.genus == 0 {
        match s.marks.as_slice() {
            [_] => return Geometry::Bad,
            [p, q] if p != q => return Geometry::Bad,
            _ => {}
        }
    }
    let chi = euler_characteristic(s);
    if chi.is_positive() {
        Geometry::Spherical
    } else if chi.is_zero() {
        Geometry::Euclidean
    } else {
        Geometry::Hyperbolic
    }
}

/// An unramified (in the orbifold sense) cover by a smooth surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverData {
    pub degree: u64,
    pub orbifold_euler: String,
    /// `χ(S̃) = NN·χ_orb`
    pub cover_euler: i64,
    /// `g̃ = 1 − NN·χ_orb/2`
    pub genus: u64,
}

/// Genus of the degree-`nn` smooth cover `S̃ → S`. Admissible degrees are
/// multiples of `lcm(m_i)` making `nn·χ_orb` an even integer with `g̃ ≥ 0`;
/// a spherical base has a single smooth cover, of degree `2/χ_orb`.
pub fn smooth_cover_data(s: &OrbifoldSurface, nn: u64) -> Result<CoverData, OrbifoldError> {
    let geometry = classify_orbifold(s);
    if geometry == Geometry::Bad {
        return Err(OrbifoldError::BadOrbifold);
    }
    let chi = euler_characteristic(s);
    let reject = |reason: String| OrbifoldError::CoverDegree { degree: nn as i64, reason };
    if nn == 0 {
        return Err(reject("degree must be ≥ 1".into()));
    }
    if !nn.is_multiple_of(s.lcm()) {
        return Err(reject(format!("not a multiple of lcm = {}", s.lcm())));
    }
    let total = &chi * BigRational::from_integer(nn.into());
    if !total.is_integer() || total.numer().is_odd() {
        return Err(reject(format!("{nn}·χ = {total} is not an even integer")));
    }
    let cover_euler = total.to_integer().to_i64().ok_or_else(|| reject("Euler characteristic overflows".into()))?;
    if cover_euler > 2 {
        return Err(reject(format!("χ = {cover_euler} > 2; the only smooth cover has degree {}", spherical_degree(&chi))));
    }
    Ok(CoverData {
        degree: nn,
        orbifold_euler: chi.to_string(),
        cover_euler,
        genus: (1 - cover_euler / 2) as u64,
    })
}

fn spherical_degree(chi: &BigRational) -> BigInt {
    (BigRational::from_integer(2.into()) / chi).to_integer()
}

/// The smallest admissible cover degree: `2/χ_orb` for spherical bases,
/// otherwise the least multiple of `lcm(m_i)` with `NN·χ_orb ∈ 2ℤ`.
pub fn canonical_cover_degree(s: &OrbifoldSurface) -> Result<u64, OrbifoldError> {
    let chi = euler_characteristic(s);
    match classify_orbifold(s) {
        Geometry::Bad => Err(OrbifoldError::BadOrbifold),
        Geometry::Spherical => {
            spherical_degree(&chi).to_u64().ok_or(OrbifoldError::CoverDegree { degree: 0, reason: "overflow".into() })
        }
        _ => {
            let l = s.lcm();
            // l·χ = n/d in lowest terms; the multiplier must clear d and the parity of n
            let x = &chi * BigRational::from_integer(l.into());
            let d = x.denom().to_u64().expect("denominator divides lcm");
            let n_odd = x.numer().is_odd();
            Ok(l * d * if n_odd { 2 } else { 1 })
        }
    }
}

/// Seifert-type data of an orbibundle: background degree `e` and a local
/// invariant `b_i mod m_i` at each cone point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbibundleData {
    pub base: OrbifoldSurface,
    pub e: i64,
    /// `(m_i, b_i)` with `0 ≤ b_i < m_i`, sorted.
    pub local: Vec<(u32, i64)>,
}

impl OrbibundleData {
    /// The multiplicities in `local` must be those of `base`.
    pub fn new(base: OrbifoldSurface, e: i64, local: &[(i64, i64)]) -> Result<Self, OrbifoldError> {
        let mut pairs = Vec::with_capacity(local.len());
        for &(m, b) in local {
            if m < 1 {
                return Err(OrbifoldError::BadMultiplicity(m));
            }
            if !(0..m).contains(&b) {
                return Err(OrbifoldError::Bundle(format!("local invariant {b} not in 0..{m}")));
            }
            if m > 1 {
                pairs.push((m as u32, b));
            }
        }
        pairs.sort_unstable();
        let ms: Vec<u32> = pairs.iter().map(|p| p.0).collect();
        if ms != base.marks {
            return Err(OrbifoldError::Bundle(format!("local multiplicities {ms:?} differ from marks {:?}", base.marks)));
        }
        Ok(OrbibundleData { base, e, local: pairs })
    }

    /// Local data `b_i = 0` everywhere.
    pub fn trivial_local(base: OrbifoldSurface, e: i64) -> Self {
        let local = base.marks.iter().map(|&m| (m, 0)).collect();
        OrbibundleData { base, e, local }
    }
}

/// `deg_orb = e + Σ b_i/m_i`.
pub fn orbidegree(l: &OrbibundleData) -> BigRational {
    let mut d = BigRational::from_integer(l.e.into());
    for &(m, b) in &l.local {
        d += BigRational::new(b.into(), m.into());
    }
    d
}

/// Negative orbibundles are the contractible ones.
pub fn is_contractible(l: &OrbibundleData) -> bool {
    orbidegree(l).is_negative()
}

/// Bundle part of the JSON document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleDocument {
    pub e: i64,
    #[serde(default)]
    pub local: Vec<[i64; 2]>,
}

/// Wire format of an orbifold, optionally with an orbibundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbifoldDocument {
    pub genus: u32,
    #[serde(default)]
    pub marks: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleDocument>,
}

impl OrbifoldDocument {
    pub fn surface(&self) -> Result<OrbifoldSurface, OrbifoldError> {
        OrbifoldSurface::new(self.genus, &self.marks)
    }

    pub fn bundle(&self) -> Result<Option<OrbibundleData>, OrbifoldError> {
        let base = self.surface()?;
        self.bundle
            .as_ref()
            .map(|b| {
                let local: Vec<(i64, i64)> = b.local.iter().map(|[m, b]| (*m, *b)).collect();
                OrbibundleData::new(base.clone(), b.e, &local)
            })
            .transpose()
    }
}

impl TryFrom<OrbifoldDocument> for OrbifoldSurface {
    type Error = OrbifoldError;

    fn try_from(d: OrbifoldDocument) -> Result<Self, Self::Error> {
        d.surface()
    }
}

impl From<OrbifoldSurface> for OrbifoldDocument {
    fn from(s: OrbifoldSurface) -> Self {
        OrbifoldDocument { genus: s.genus, marks: s.marks.iter().map(|&m| m as i64).collect(), bundle: None }
    }
}
