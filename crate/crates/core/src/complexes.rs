//! Bounded complexes represented by their cohomology sheaves plus opaque
//! gluing witnesses, and the table-level operations on them.
//!
//! Hypercohomology is read off the spectral sequence
//! `E₂^{p,q} = H^p(𝓗^q(E)(t)) ⇒ H^{p+q}(E(t))`. For formal complexes it
//! degenerates and the sums are exact; with nonzero glue the sums are upper
//! bounds unless the page is forced to degenerate.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cohomology::{column, CohomologyTable, SheafDescriptor, SpinorSign, Twist};
use crate::chern::{euler_char, twist_class, NumClass};
use crate::variety::{hyperplane_model, ModelKind, VarietyModel};
use crate::{Error, Result};

/// Opaque witness for a nonzero class gluing `𝓗^from` to `𝓗^to`, living in
/// `Ext^{from−to+1}(𝓗^from, 𝓗^to)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Glue {
    pub from: i64,
    pub to: i64,
    pub nonzero: bool,
}

impl Glue {
    pub fn ext_degree(&self) -> i64 {
        self.from - self.to + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalComplex {
    model: VarietyModel,
    sheaves: BTreeMap<i64, SheafDescriptor>,
    glue: Vec<Glue>,
}

impl FormalComplex {
    pub fn new(
        model: VarietyModel,
        sheaves: BTreeMap<i64, SheafDescriptor>,
        glue: Vec<Glue>,
    ) -> Result<Self> {
        for desc in sheaves.values() {
            desc.validate(&model)?;
        }
        for g in &glue {
            if g.from <= g.to {
                return Err(Error::InvalidDescriptor(format!(
                    "glue must go from a higher to a lower degree, got {} -> {}",
                    g.from, g.to
                )));
            }
            if !sheaves.contains_key(&g.from) || !sheaves.contains_key(&g.to) {
                return Err(Error::InvalidDescriptor(format!(
                    "glue {} -> {} touches an empty degree",
                    g.from, g.to
                )));
            }
        }
        Ok(FormalComplex {
            model,
            sheaves,
            glue,
        })
    }

    pub fn from_sheaves(
        model: VarietyModel,
        sheaves: impl IntoIterator<Item = (i64, SheafDescriptor)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<i64, SheafDescriptor> = BTreeMap::new();
        for (deg, desc) in sheaves {
            let merged = match map.remove(&deg) {
                Some(prev) => SheafDescriptor::sum([(prev, 1), (desc, 1)]),
                None => desc,
            };
            map.insert(deg, merged);
        }
        Self::new(model, map, Vec::new())
    }

    /// A single sheaf placed in degree `deg`.
    pub fn sheaf(model: VarietyModel, desc: SheafDescriptor, deg: i64) -> Result<Self> {
        Self::from_sheaves(model, [(deg, desc)])
    }

    pub fn zero(model: VarietyModel) -> Self {
        FormalComplex {
            model,
            sheaves: BTreeMap::new(),
            glue: Vec::new(),
        }
    }

    pub fn model(&self) -> &VarietyModel {
        &self.model
    }

    pub fn sheaves(&self) -> impl Iterator<Item = (i64, &SheafDescriptor)> {
        self.sheaves.iter().map(|(d, s)| (*d, s))
    }

    pub fn sheaf_at(&self, deg: i64) -> Option<&SheafDescriptor> {
        self.sheaves.get(&deg)
    }

    pub fn glue(&self) -> &[Glue] {
        &self.glue
    }

    pub fn is_glued(&self) -> bool {
        self.glue.iter().any(|g| g.nonzero)
    }

    pub fn is_zero(&self) -> bool {
        self.sheaves.is_empty()
    }

    /// Lowest and highest nonzero degree.
    pub fn amplitude(&self) -> Option<(i64, i64)> {
        Some((*self.sheaves.keys().next()?, *self.sheaves.keys().next_back()?))
    }

    /// `E[k]`, with `E[k]^i = E^{i+k}`.
    pub fn shift(&self, k: i64) -> FormalComplex {
        FormalComplex {
            model: self.model,
            sheaves: self.sheaves.iter().map(|(d, s)| (d - k, s.clone())).collect(),
            glue: self
                .glue
                .iter()
                .map(|g| Glue {
                    from: g.from - k,
                    to: g.to - k,
                    nonzero: g.nonzero,
                })
                .collect(),
        }
    }

    pub fn direct_sum(parts: &[FormalComplex]) -> Result<FormalComplex> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidDescriptor("empty direct sum of complexes".into()))?;
        let mut sheaves: Vec<(i64, SheafDescriptor)> = Vec::new();
        let mut glue = Vec::new();
        for p in parts {
            if p.model != first.model {
                return Err(Error::ModelMismatch(first.model.to_string(), p.model.to_string()));
            }
            sheaves.extend(p.sheaves.iter().map(|(d, s)| (*d, s.clone())));
            glue.extend(p.glue.iter().copied());
        }
        let merged = FormalComplex::from_sheaves(first.model, sheaves)?;
        FormalComplex::new(first.model, merged.sheaves, glue)
    }
}

/// How far a hypercohomology column can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// No nonzero glue: the complex is formal and the sums are exact.
    Exact,
    /// Every `E₂` term vanishes at this twist, so the hypercohomology does.
    ExactByVanishing,
    /// No differential `d_r`, `r ≥ 2`, connects two nonzero `E₂` terms.
    ExactByDegeneration,
    /// The sums bound the hypercohomology from above.
    UpperBoundOnly,
}

impl Certificate {
    pub fn is_exact(self) -> bool {
        !matches!(self, Certificate::UpperBoundOnly)
    }
}

/// Hypercohomology `h^k(E ⊗ L)` as a map `k → dim` from the `E₂` page.
pub fn hyper_column(complex: &FormalComplex, twist: Twist) -> Result<(BTreeMap<i64, u64>, Certificate)> {
    let mut e2: Vec<(i64, i64, u64)> = Vec::new();
    for (q, desc) in complex.sheaves() {
        for (p, h) in column(desc, &complex.model, twist)?.into_iter().enumerate() {
            if h > 0 {
                e2.push((p as i64, q, h));
            }
        }
    }
    let mut col = BTreeMap::new();
    for &(p, q, h) in &e2 {
        *col.entry(p + q).or_insert(0) += h;
    }
    let cert = e2_certificate(complex.is_glued(), &e2);
    Ok((col, cert))
}

/// Certificate for an `E₂` page given as `(p, q, dim)` triples.
pub(crate) fn e2_certificate(glued: bool, e2: &[(i64, i64, u64)]) -> Certificate {
    let e2: Vec<_> = e2.iter().filter(|(_, _, h)| *h > 0).collect();
    if !glued {
        return Certificate::Exact;
    }
    if e2.is_empty() {
        return Certificate::ExactByVanishing;
    }
    // d_r : E_r^{p,q} → E_r^{p+r, q−r+1}
    let connected = e2.iter().any(|&&(p, q, _)| {
        e2.iter()
            .any(|&&(p2, q2, _)| p2 - p >= 2 && q2 == q - (p2 - p) + 1)
    });
    if connected {
        Certificate::UpperBoundOnly
    } else {
        Certificate::ExactByDegeneration
    }
}

/// Hypercohomology table with a per-twist certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HyperTable {
    pub table: CohomologyTable,
    pub certificates: BTreeMap<i64, Certificate>,
}

impl HyperTable {
    /// The weakest certificate over the given twists.
    pub fn certificate_over(&self, twists: impl IntoIterator<Item = i64>) -> Certificate {
        let mut worst = Certificate::Exact;
        for t in twists {
            match self.certificates.get(&t) {
                Some(Certificate::UpperBoundOnly) | None => return Certificate::UpperBoundOnly,
                Some(c) if worst == Certificate::Exact => worst = *c,
                _ => {}
            }
        }
        worst
    }
}

pub fn hyper_table(complex: &FormalComplex, window: (i64, i64)) -> Result<HyperTable> {
    let mut table = CohomologyTable::empty(window);
    let mut certificates = BTreeMap::new();
    for t in window.0..=window.1 {
        let (col, cert) = hyper_column(complex, Twist::Diag(t))?;
        for (k, h) in col {
            table.set(k, t, h);
        }
        certificates.insert(t, cert);
    }
    Ok(HyperTable {
        table,
        certificates,
    })
}

/// A nonzero entry that breaks a vanishing condition. `degree` names the
/// offending cohomology sheaf when the check was sheafwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub degree: Option<i64>,
    pub i: i64,
    pub t: i64,
    pub h: u64,
}

/// First nonzero `h^i(E(−j))`, `j = 1..=dim`, in a table.
pub fn ulrich_failure(table: &CohomologyTable, dim: u32) -> Option<Witness> {
    (1..=dim as i64).find_map(|j| {
        table.column(-j).first().map(|&(i, h)| Witness {
            degree: None,
            i,
            t: -j,
            h,
        })
    })
}

// ---------------------------------------------------------------------------
// Distinguished triangles E → F → G → E[1].

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TriangleRole {
    E,
    F,
    G,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ThirdOutcome {
    /// Both known vertices are Ulrich, hence so is the third.
    CertifiedUlrich,
    /// Exactly one known vertex is Ulrich; the third cannot be, or the failing
    /// known vertex would be Ulrich as well.
    CertifiedNotUlrich { role: TriangleRole, witness: Witness },
    /// Neither known vertex is Ulrich.
    NotDetermined { role: TriangleRole, witness: Witness },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TriangleVerdict {
    pub third: TriangleRole,
    pub outcome: ThirdOutcome,
    /// `χ` of the third vertex at each twist, predicted from the two tables.
    pub predicted_euler: BTreeMap<i64, i64>,
    /// `χ(F(t)) = χ(E(t)) + χ(G(t))` on Chern classes, when all three are given.
    pub chi_additive: Option<bool>,
}

pub fn triangle_2of3(
    known: [(TriangleRole, &CohomologyTable); 2],
    model: &VarietyModel,
    classes: Option<[&NumClass; 3]>,
) -> Result<TriangleVerdict> {
    let [(ra, ta), (rb, tb)] = known;
    if ra == rb {
        return Err(Error::InvalidDescriptor("two tables for the same vertex".into()));
    }
    let third = [TriangleRole::E, TriangleRole::F, TriangleRole::G]
        .into_iter()
        .find(|r| *r != ra && *r != rb)
        .expect("three roles");
    let n = model.dim() as i64;
    for (role, t) in [(ra, ta), (rb, tb)] {
        if t.window.0 > -n || t.window.1 < -1 || !t.complete {
            return Err(Error::IncompleteTable(format!(
                "table for {role:?} does not cover twists -{n}..-1"
            )));
        }
    }
    let fa = ulrich_failure(ta, model.dim());
    let fb = ulrich_failure(tb, model.dim());
    let outcome = match (fa, fb) {
        (None, None) => ThirdOutcome::CertifiedUlrich,
        (Some(w), None) => ThirdOutcome::CertifiedNotUlrich { role: ra, witness: w },
        (None, Some(w)) => ThirdOutcome::CertifiedNotUlrich { role: rb, witness: w },
        (Some(w), Some(_)) => ThirdOutcome::NotDetermined { role: ra, witness: w },
    };

    let lo = ta.window.0.max(tb.window.0);
    let hi = ta.window.1.min(tb.window.1);
    let mut predicted_euler = BTreeMap::new();
    for t in lo..=hi {
        let (xa, xb) = (ta.euler(t), tb.euler(t));
        let chi = match (ra, rb, third) {
            (_, _, TriangleRole::F) => xa + xb,
            (TriangleRole::F, _, _) => xa - xb,
            (_, TriangleRole::F, _) => xb - xa,
            _ => unreachable!("F is known when it is not the third vertex"),
        };
        predicted_euler.insert(t, chi);
    }

    let chi_additive = match classes {
        Some([ce, cf, cg]) => {
            let mut ok = true;
            for t in lo..=hi {
                let chi = |c: &NumClass| euler_char(&twist_class(c, t), model);
                ok &= chi(cf)? == chi(ce)? + chi(cg)?;
            }
            Some(ok)
        }
        None => None,
    };
    Ok(TriangleVerdict {
        third,
        outcome,
        predicted_euler,
        chi_additive,
    })
}

// ---------------------------------------------------------------------------
// External products on P^{n1} × P^{n2}.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductSide {
    /// `E(dim Y) ⊠ F`.
    TwistFirst,
    /// `E ⊠ F(dim X)`.
    TwistSecond,
}

fn twist_descriptor(desc: &SheafDescriptor, k: i64) -> Result<SheafDescriptor> {
    match desc {
        SheafDescriptor::LineBundle { twists } => Ok(SheafDescriptor::LineBundle {
            twists: twists.iter().map(|a| a + k).collect(),
        }),
        SheafDescriptor::DirectSum(parts) => Ok(SheafDescriptor::DirectSum(
            parts
                .iter()
                .map(|(d, m)| Ok((twist_descriptor(d, k)?, *m)))
                .collect::<Result<_>>()?,
        )),
        _ => Err(Error::UnsupportedProduct(format!("cannot twist {desc}"))),
    }
}

fn boxed(left: &SheafDescriptor, right: &SheafDescriptor) -> SheafDescriptor {
    match (left, right) {
        (SheafDescriptor::DirectSum(parts), r) => SheafDescriptor::sum(
            parts.iter().map(|(d, m)| (boxed(d, r), *m)),
        ),
        (l, SheafDescriptor::DirectSum(parts)) => SheafDescriptor::sum(
            parts.iter().map(|(d, m)| (boxed(l, d), *m)),
        ),
        (SheafDescriptor::LineBundle { twists: a }, SheafDescriptor::LineBundle { twists: b })
            if a.len() == 1 && b.len() == 1 =>
        {
            SheafDescriptor::line2(a[0], b[0])
        }
        (l, r) => SheafDescriptor::ExternalTensor(Box::new(l.clone()), Box::new(r.clone())),
    }
}

/// `E ⊠ F(dim X)` or `E(dim Y) ⊠ F` on `P^{n1} × P^{n2}` with `𝒪(1,1)`.
pub fn external_product(
    left: &FormalComplex,
    right: &FormalComplex,
    side: ProductSide,
) -> Result<FormalComplex> {
    let (ModelKind::ProjSpace { n: n1 }, ModelKind::ProjSpace { n: n2 }) =
        (left.model.kind(), right.model.kind())
    else {
        return Err(Error::UnsupportedProduct(format!(
            "{} x {}: only products of projective spaces are modelled",
            left.model, right.model
        )));
    };
    if left.is_glued() || right.is_glued() {
        return Err(Error::UnsupportedProduct("glued factors".into()));
    }
    let target = VarietyModel::product(n1, n2)?;
    let mut terms = Vec::new();
    for (p, a) in left.sheaves() {
        for (q, b) in right.sheaves() {
            let (a, b) = match side {
                ProductSide::TwistFirst => (twist_descriptor(a, n2 as i64)?, b.clone()),
                ProductSide::TwistSecond => (a.clone(), twist_descriptor(b, n1 as i64)?),
            };
            terms.push((p + q, boxed(&a, &b)));
        }
    }
    FormalComplex::from_sheaves(target, terms)
}

// ---------------------------------------------------------------------------
// Hyperplane restriction.

fn restrict_descriptor(desc: &SheafDescriptor, from: &VarietyModel) -> Result<SheafDescriptor> {
    match (desc, from.kind()) {
        (SheafDescriptor::LineBundle { twists }, ModelKind::ProjSpace { .. } | ModelKind::Quadric { .. })
            if twists.len() == 1 =>
        {
            Ok(desc.clone())
        }
        (SheafDescriptor::Spinor { sign: None }, ModelKind::Quadric { n: 3 }) => Ok(SheafDescriptor::sum([
            (SheafDescriptor::spinor(Some(SpinorSign::Plus)), 1),
            (SheafDescriptor::spinor(Some(SpinorSign::Minus)), 1),
        ])),
        (SheafDescriptor::DirectSum(parts), _) => Ok(SheafDescriptor::sum(
            parts
                .iter()
                .map(|(d, m)| Ok((restrict_descriptor(d, from)?, *m)))
                .collect::<Result<Vec<_>>>()?,
        )),
        _ => Err(Error::NoRestrictionRule(format!("{desc} on {from}"))),
    }
}

/// `E|_Y` for a general hyperplane section `Y`. Glue witnesses are carried
/// over unchanged.
pub fn restrict_hyperplane(complex: &FormalComplex) -> Result<FormalComplex> {
    let target = hyperplane_model(&complex.model)?;
    let sheaves = complex
        .sheaves()
        .map(|(d, s)| Ok((d, restrict_descriptor(s, &complex.model)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    FormalComplex::new(target, sheaves, complex.glue.clone())
}

// ---------------------------------------------------------------------------
// Finite linear projections.

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trivialization {
    /// `π_*E ≅ ⊕ 𝒪^{m_i}[−i]`.
    Trivial { multiplicities: BTreeMap<i64, u64> },
    NotTrivialized { witness: Witness, certificate: Certificate },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PushforwardReport {
    pub target: VarietyModel,
    /// Twisted cohomology of `π_*E`, identical to that of `E` because
    /// `π^*𝒪(1) = 𝒪_X(1)` and `π` has no higher direct images.
    pub table: CohomologyTable,
    pub result: Trivialization,
}

pub fn pushforward_finite(
    complex: &FormalComplex,
    target: &VarietyModel,
    window: (i64, i64),
) -> Result<PushforwardReport> {
    let ModelKind::ProjSpace { n } = target.kind() else {
        return Err(Error::UnsupportedModel(format!(
            "finite linear projections land in projective space, not {target}"
        )));
    };
    if n != complex.model.dim() {
        return Err(Error::DimensionMismatch {
            source_dim: complex.model.dim(),
            target_dim: n,
        });
    }
    let window = (window.0.min(-(n as i64)), window.1.max(0));
    let hyper = hyper_table(complex, window)?;
    let result = match ulrich_failure(&hyper.table, n) {
        Some(witness) => Trivialization::NotTrivialized {
            witness,
            certificate: hyper.certificates[&witness.t],
        },
        None => {
            let at_zero = hyper_column(complex, Twist::Diag(0))?;
            if !at_zero.1.is_exact() {
                return Err(Error::IncompleteTable(
                    "h^i(E) is only bounded at twist 0".into(),
                ));
            }
            Trivialization::Trivial {
                multiplicities: at_zero.0,
            }
        }
    };
    Ok(PushforwardReport {
        target: *target,
        table: hyper.table,
        result,
    })
}

/// Rank of `⊕ 𝓗^i` counted without signs.
pub fn total_rank(complex: &FormalComplex) -> u64 {
    complex
        .sheaves()
        .map(|(_, s)| s.rank(&complex.model) as u64)
        .sum()
}

// ---------------------------------------------------------------------------
// JSON: {"variety": …, "sheaves": {"-1": "O(0,1)", "0": "O(1,0)"}, "glue": […]}.

struct SheafMap<'a>(&'a BTreeMap<i64, SheafDescriptor>);

impl Serialize for SheafMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (deg, desc) in self.0 {
            map.serialize_entry(&deg.to_string(), &desc.to_string())?;
        }
        map.end()
    }
}

impl Serialize for FormalComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("variety", &self.model)?;
        map.serialize_entry("sheaves", &SheafMap(&self.sheaves))?;
        map.serialize_entry("glue", &self.glue)?;
        map.end()
    }
}

#[derive(Deserialize)]
struct ComplexRepr {
    variety: VarietyModel,
    sheaves: BTreeMap<String, String>,
    #[serde(default)]
    glue: Vec<Glue>,
}

impl<'de> Deserialize<'de> for FormalComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ComplexRepr::deserialize(d)?;
        let mut sheaves = BTreeMap::new();
        for (deg, desc) in repr.sheaves {
            let deg: i64 = deg.trim().parse().map_err(D::Error::custom)?;
            let desc = SheafDescriptor::parse(&desc, &repr.variety).map_err(D::Error::custom)?;
            sheaves.insert(deg, desc);
        }
        FormalComplex::new(repr.variety, sheaves, repr.glue).map_err(D::Error::custom)
    }
}
