//! Polarized model varieties and their numeric invariants.
//!
//! Every downstream computation dispatches on [`ModelKind`]. The invariants of
//! a model are forced by its kind; only the Picard-rank-one surface carries
//! user-supplied numbers `(d, i_X, χ(𝒪))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    ProjSpace { n: u32 },
    Quadric { n: u32 },
    /// `P^{n1} × P^{n2}` polarized by `𝒪(1,1)`.
    ProductProj { n1: u32, n2: u32 },
    /// Surface with `Pic = ℤ·H`, `H² = d`, `K = i_X·H`.
    Rank1Surface { d: i64, i_x: i64, chi0: i64 },
    /// Genus-one curve embedded by a line bundle of degree `d`.
    EllipticCurve { d: u32 },
}

/// A validated model. Construct with [`VarietyModel::new`] or by parsing the
/// textual grammar (`pn:3`, `quadric:3`, `prod:1x1`, `surface:d=4,i=0,chi=2`,
/// `elliptic:3`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VarietyModel {
    kind: ModelKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub dim: u32,
    pub deg: u64,
    /// `i_X` with `K_X = i_X·H`; absent when `K_X` is not a multiple of `H`.
    pub canonical_coeff: Option<i64>,
    pub chi0: i64,
    pub k0_rank: Option<u32>,
    pub ambient_dim: Option<u64>,
}

/// The numbers Riemann–Roch needs on a surface whose canonical class is a
/// multiple of the polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurfaceData {
    pub d: i64,
    pub i_x: i64,
    pub chi0: i64,
}

pub(crate) fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < k {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    u64::try_from(acc).expect("binomial coefficient overflows u64")
}

impl VarietyModel {
    pub fn new(kind: ModelKind) -> Result<Self> {
        let bad = |msg: &str| Err(Error::MalformedModel(msg.to_string()));
        match kind {
            ModelKind::ProjSpace { n } if n < 1 => return bad("projective space needs n >= 1"),
            ModelKind::Quadric { n } if n < 2 => return bad("quadric needs n >= 2"),
            ModelKind::ProductProj { n1, n2 } if n1 < 1 || n2 < 1 => {
                return bad("product factors need dimension >= 1")
            }
            ModelKind::Rank1Surface { d, .. } if d < 1 => return bad("surface needs H^2 = d >= 1"),
            ModelKind::EllipticCurve { d } if d < 3 => {
                return bad("elliptic curve needs degree d >= 3 to be embedded")
            }
            _ => {}
        }
        Ok(VarietyModel { kind })
    }

    pub fn proj(n: u32) -> Result<Self> {
        Self::new(ModelKind::ProjSpace { n })
    }

    pub fn quadric(n: u32) -> Result<Self> {
        Self::new(ModelKind::Quadric { n })
    }

    pub fn product(n1: u32, n2: u32) -> Result<Self> {
        Self::new(ModelKind::ProductProj { n1, n2 })
    }

    pub fn surface(d: i64, i_x: i64, chi0: i64) -> Result<Self> {
        Self::new(ModelKind::Rank1Surface { d, i_x, chi0 })
    }

    pub fn elliptic(d: u32) -> Result<Self> {
        Self::new(ModelKind::EllipticCurve { d })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> u32 {
        match self.kind {
            ModelKind::ProjSpace { n } | ModelKind::Quadric { n } => n,
            ModelKind::ProductProj { n1, n2 } => n1 + n2,
            ModelKind::Rank1Surface { .. } => 2,
            ModelKind::EllipticCurve { .. } => 1,
        }
    }

    pub fn deg(&self) -> u64 {
        match self.kind {
            ModelKind::ProjSpace { .. } => 1,
            ModelKind::Quadric { .. } => 2,
            ModelKind::ProductProj { n1, n2 } => binomial((n1 + n2) as i64, n1 as i64),
            ModelKind::Rank1Surface { d, .. } => d as u64,
            ModelKind::EllipticCurve { d } => d as u64,
        }
    }

    pub fn canonical_coeff(&self) -> Option<i64> {
        match self.kind {
            ModelKind::ProjSpace { n } => Some(-(n as i64) - 1),
            ModelKind::Quadric { n } => Some(-(n as i64)),
            ModelKind::ProductProj { n1, n2 } if n1 == n2 => Some(-(n1 as i64) - 1),
            ModelKind::ProductProj { .. } => None,
            ModelKind::Rank1Surface { i_x, .. } => Some(i_x),
            ModelKind::EllipticCurve { .. } => Some(0),
        }
    }

    pub fn chi0(&self) -> i64 {
        match self.kind {
            ModelKind::Rank1Surface { chi0, .. } => chi0,
            ModelKind::EllipticCurve { .. } => 0,
            _ => 1,
        }
    }

    pub fn k0_rank(&self) -> Option<u32> {
        match self.kind {
            ModelKind::ProjSpace { n } => Some(n + 1),
            ModelKind::Quadric { n } if n % 2 == 0 => Some(n + 2),
            ModelKind::Quadric { n } => Some(n + 1),
            ModelKind::ProductProj { n1, n2 } => Some((n1 + 1) * (n2 + 1)),
            ModelKind::Rank1Surface { .. } => None,
            ModelKind::EllipticCurve { .. } => Some(2),
        }
    }

    pub fn ambient_dim(&self) -> Option<u64> {
        match self.kind {
            ModelKind::ProjSpace { n } => Some(n as u64),
            ModelKind::Quadric { n } => Some(n as u64 + 1),
            ModelKind::ProductProj { n1, n2 } => Some((n1 as u64 + 1) * (n2 as u64 + 1) - 1),
            ModelKind::Rank1Surface { .. } => None,
            ModelKind::EllipticCurve { d } => Some(d as u64 - 1),
        }
    }

    pub fn invariants(&self) -> Invariants {
        Invariants {
            dim: self.dim(),
            deg: self.deg(),
            canonical_coeff: self.canonical_coeff(),
            chi0: self.chi0(),
            k0_rank: self.k0_rank(),
            ambient_dim: self.ambient_dim(),
        }
    }

    /// Length of a line-bundle twist vector on this model.
    pub fn twist_len(&self) -> usize {
        match self.kind {
            ModelKind::ProductProj { .. } => 2,
            _ => 1,
        }
    }

    /// Whether bidegree twists `𝒪(a,b)` make sense (`P^{n1}×P^{n2}` and `Q² ≅ P¹×P¹`).
    pub fn has_bidegrees(&self) -> bool {
        matches!(
            self.kind,
            ModelKind::ProductProj { .. } | ModelKind::Quadric { n: 2 }
        )
    }

    /// `(n1, n2)` factor dimensions for bidegree models.
    pub fn factor_dims(&self) -> Option<(u32, u32)> {
        match self.kind {
            ModelKind::ProductProj { n1, n2 } => Some((n1, n2)),
            ModelKind::Quadric { n: 2 } => Some((1, 1)),
            _ => None,
        }
    }

    pub fn surface_data(&self) -> Option<SurfaceData> {
        if self.dim() != 2 {
            return None;
        }
        let i_x = self.canonical_coeff()?;
        Some(SurfaceData {
            d: self.deg() as i64,
            i_x,
            chi0: self.chi0(),
        })
    }

    /// Default twist window `[−(2·dim+5), dim+2]`.
    pub fn default_window(&self) -> (i64, i64) {
        let n = self.dim() as i64;
        (-(2 * n + 5), n + 2)
    }
}

/// Canonical hyperplane section model; the polarization restricts to `𝒪(1)`.
pub fn hyperplane_model(model: &VarietyModel) -> Result<VarietyModel> {
    match model.kind {
        ModelKind::ProjSpace { n } if n >= 2 => VarietyModel::proj(n - 1),
        ModelKind::Quadric { n } if n >= 3 => VarietyModel::quadric(n - 1),
        _ => Err(Error::UnsupportedModel(format!(
            "no canonical hyperplane section model for {model}"
        ))),
    }
}

impl fmt::Display for VarietyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModelKind::ProjSpace { n } => write!(f, "pn:{n}"),
            ModelKind::Quadric { n } => write!(f, "quadric:{n}"),
            ModelKind::ProductProj { n1, n2 } => write!(f, "prod:{n1}x{n2}"),
            ModelKind::Rank1Surface { d, i_x, chi0 } => write!(f, "surface:d={d},i={i_x},chi={chi0}"),
            ModelKind::EllipticCurve { d } => write!(f, "elliptic:{d}"),
        }
    }
}

impl FromStr for VarietyModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad variety spec {s:?}"));
        let (head, rest) = s.split_once(':').ok_or_else(bad)?;
        let int = |x: &str| x.trim().parse::<i64>().map_err(|_| bad());
        let nat = |x: &str| x.trim().parse::<u32>().map_err(|_| bad());
        match head.trim() {
            "pn" => VarietyModel::proj(nat(rest)?),
            "quadric" => VarietyModel::quadric(nat(rest)?),
            "elliptic" => VarietyModel::elliptic(nat(rest)?),
            "prod" => {
                let (a, b) = rest.split_once('x').ok_or_else(bad)?;
                VarietyModel::product(nat(a)?, nat(b)?)
            }
            "surface" => {
                let (mut d, mut i, mut chi) = (None, None, None);
                for part in rest.split(',') {
                    let (k, v) = part.split_once('=').ok_or_else(bad)?;
                    match k.trim() {
                        "d" => d = Some(int(v)?),
                        "i" => i = Some(int(v)?),
                        "chi" => chi = Some(int(v)?),
                        _ => return Err(bad()),
                    }
                }
                match (d, i, chi) {
                    (Some(d), Some(i), Some(chi)) => VarietyModel::surface(d, i, chi),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for VarietyModel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for VarietyModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_space_invariants() {
        let inv = VarietyModel::proj(3).unwrap().invariants();
        assert_eq!(
            inv,
            Invariants {
                dim: 3,
                deg: 1,
                canonical_coeff: Some(-4),
                chi0: 1,
                k0_rank: Some(4),
                ambient_dim: Some(3)
            }
        );
    }

    #[test]
    fn elliptic_invariants() {
        let inv = VarietyModel::elliptic(3).unwrap().invariants();
        assert_eq!((inv.dim, inv.deg, inv.chi0, inv.k0_rank), (1, 3, 0, Some(2)));
        assert_eq!(inv.ambient_dim, Some(2));
    }

    #[test]
    fn quadric_threefold_invariants() {
        // Adjunction on Q ⊂ P⁴: K_Q = (K_{P⁴} + Q)|_Q = 𝒪(−5 + 2) = 𝒪(−3).
        let adjunction = -(4 + 1) + 2;
        let inv = VarietyModel::quadric(3).unwrap().invariants();
        assert_eq!((inv.dim, inv.deg, inv.chi0), (3, 2, 1));
        assert_eq!(inv.canonical_coeff, Some(adjunction));
        assert_eq!(inv.k0_rank, Some(4));
        assert_eq!(VarietyModel::quadric(4).unwrap().k0_rank(), Some(6));
    }

    #[test]
    fn product_invariants() {
        let m = VarietyModel::product(1, 1).unwrap();
        assert_eq!((m.deg(), m.k0_rank(), m.chi0()), (2, Some(4), 1));
        assert_eq!(VarietyModel::product(1, 2).unwrap().deg(), 3);
        assert_eq!(VarietyModel::product(1, 2).unwrap().canonical_coeff(), None);
    }

    #[test]
    fn malformed_models_rejected() {
        assert!(matches!(VarietyModel::quadric(1), Err(Error::MalformedModel(_))));
        assert!(matches!(VarietyModel::elliptic(2), Err(Error::MalformedModel(_))));
        assert!(matches!(VarietyModel::proj(0), Err(Error::MalformedModel(_))));
        assert!(matches!(VarietyModel::surface(0, 1, 1), Err(Error::MalformedModel(_))));
    }

    #[test]
    fn hyperplane_sections() {
        let p3 = VarietyModel::proj(3).unwrap();
        assert_eq!(hyperplane_model(&p3).unwrap(), VarietyModel::proj(2).unwrap());
        let q3 = VarietyModel::quadric(3).unwrap();
        let q2 = hyperplane_model(&q3).unwrap();
        assert_eq!(q2, VarietyModel::quadric(2).unwrap());
        assert_eq!(q2.deg(), q3.deg());
        let s = VarietyModel::surface(4, 0, 2).unwrap();
        assert!(matches!(hyperplane_model(&s), Err(Error::UnsupportedModel(_))));
        assert!(hyperplane_model(&VarietyModel::proj(1).unwrap()).is_err());
    }

    #[test]
    fn grammar_round_trip() {
        for s in ["pn:3", "quadric:2", "prod:1x2", "surface:d=4,i=0,chi=2", "elliptic:5"] {
            let m: VarietyModel = s.parse().unwrap();
            assert_eq!(m.to_string(), s);
        }
        assert!("pn:".parse::<VarietyModel>().is_err());
        assert!("torus:2".parse::<VarietyModel>().is_err());
        assert!("surface:d=4,i=0".parse::<VarietyModel>().is_err());
    }

    #[test]
    fn invariants_are_pure() {
        let m: VarietyModel = "surface:d=7,i=-1,chi=3".parse().unwrap();
        assert_eq!(m.invariants(), m.invariants());
        assert_eq!(m.surface_data(), Some(SurfaceData { d: 7, i_x: -1, chi0: 3 }));
    }
}
