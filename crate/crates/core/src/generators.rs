//! Numerical Grothendieck classes, a rank gate for generators, orthogonality
//! against exceptional collections and the elliptic Ulrich line bundle.

use serde::{Deserialize, Serialize};

use crate::cohomology::{column, SheafDescriptor, SpinorSign, Twist};
use crate::complexes::{e2_certificate, Certificate, FormalComplex};
use crate::lattice;
use crate::ulrich::{ext_dimension, is_ulrich_sheaf, UlrichVerdict};
use crate::variety::{ModelKind, VarietyModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollectionKind {
    Beilinson,
    Kapranov,
    Custom,
}

/// An exceptional collection `(E_1, …, E_m)`: `Hom^•(E_j, E_i) = 0` for
/// `j > i` and `Hom^•(E_i, E_i) = k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Collection {
    pub model: VarietyModel,
    #[serde(serialize_with = "serialize_members")]
    pub members: Vec<SheafDescriptor>,
    pub kind: CollectionKind,
    /// Pairs `(i, j)` whose vanishing no oracle could check.
    pub unverified: Vec<(usize, usize)>,
}

fn serialize_members<S: serde::Serializer>(
    members: &[SheafDescriptor],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(members.iter().map(ToString::to_string))
}

fn ext_total(f: &SheafDescriptor, g: &SheafDescriptor, model: &VarietyModel) -> Result<Option<Vec<u64>>> {
    let mut out = Vec::new();
    for k in 0..=model.dim() as i64 {
        match ext_dimension(f, g, k, model) {
            Ok(v) => out.push(v),
            Err(Error::NoDualRule(_)) | Err(Error::NoOracle(_)) | Err(Error::UnknownSlopeZero(_)) => {
                return Ok(None)
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Some(out))
}

impl Collection {
    /// Checks the exceptional conditions wherever the Ext oracle applies.
    pub fn register(model: VarietyModel, members: Vec<SheafDescriptor>, kind: CollectionKind) -> Result<Self> {
        let mut unverified = Vec::new();
        for (i, e) in members.iter().enumerate() {
            e.validate(&model)?;
            match ext_total(e, e, &model)? {
                Some(exts) if exts.first() != Some(&1) || exts[1..].iter().any(|&h| h != 0) => {
                    return Err(Error::InvalidDescriptor(format!("{e} is not exceptional: Ext^• = {exts:?}")));
                }
                Some(_) => {}
                None => unverified.push((i, i)),
            }
            for (j, f) in members.iter().enumerate().skip(i + 1) {
                match ext_total(f, e, &model)? {
                    Some(exts) if exts.iter().any(|&h| h != 0) => {
                        return Err(Error::InvalidDescriptor(format!(
                            "Hom^•({f}, {e}) = {exts:?} does not vanish"
                        )));
                    }
                    Some(_) => {}
                    None => unverified.push((i, j)),
                }
            }
        }
        Ok(Collection {
            model,
            members,
            kind,
            unverified,
        })
    }

    /// `(𝒪, 𝒪(1), …, 𝒪(n))` on `Pⁿ`.
    pub fn beilinson(model: VarietyModel) -> Result<Self> {
        let ModelKind::ProjSpace { n } = model.kind() else {
            return Err(Error::UnsupportedModel(format!("Beilinson collection on {model}")));
        };
        let members = (0..=n as i64).map(SheafDescriptor::line).collect();
        Self::register(model, members, CollectionKind::Beilinson)
    }

    /// `(𝒪, S, 𝒪(1), …, 𝒪(n−1))` on `Q_n` with both spinors when `n` is even.
    pub fn kapranov(model: VarietyModel) -> Result<Self> {
        let ModelKind::Quadric { n } = model.kind() else {
            return Err(Error::UnsupportedModel(format!("Kapranov collection on {model}")));
        };
        let spinors = match n {
            2 => vec![
                SheafDescriptor::spinor(Some(SpinorSign::Plus)),
                SheafDescriptor::spinor(Some(SpinorSign::Minus)),
            ],
            3 => vec![SheafDescriptor::spinor(None)],
            n => return Err(Error::UnsupportedQuadricDim(n)),
        };
        let mut members = vec![SheafDescriptor::structure()];
        members.extend(spinors);
        members.extend((1..n as i64).map(SheafDescriptor::line));
        Self::register(model, members, CollectionKind::Kapranov)
    }

    /// The members after the first `k`.
    pub fn suffix(&self, k: usize) -> &[SheafDescriptor] {
        &self.members[k.min(self.members.len())..]
    }
}

/// Coordinates in the numerical Grothendieck group.
///
/// `Pⁿ` and odd quadrics: `χ(E(−j))`, `j = 0..=n`. Bidegree models:
/// `χ(E(−a,−b))`, `a ≤ n1`, `b ≤ n2`. Elliptic curves: `(rank, degree)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0Class(pub Vec<i64>);

impl K0Class {
    pub fn negate(&self) -> K0Class {
        K0Class(self.0.iter().map(|x| -x).collect())
    }
}

fn probe_twists(model: &VarietyModel) -> Result<Vec<Twist>> {
    match model.kind() {
        ModelKind::ProjSpace { n } => Ok((0..=n as i64).map(|j| Twist::Diag(-j)).collect()),
        ModelKind::Quadric { n } if n % 2 == 1 => Ok((0..=n as i64).map(|j| Twist::Diag(-j)).collect()),
        _ => match model.factor_dims() {
            Some((n1, n2)) => Ok((0..=n1 as i64)
                .flat_map(|a| (0..=n2 as i64).map(move |b| Twist::Bi(-a, -b)))
                .collect()),
            None => Err(Error::Indeterminate(format!("no numerical K-lattice coordinates on {model}"))),
        },
    }
}

fn elliptic_rank_degree(desc: &SheafDescriptor, d: i64) -> Result<(i64, i64)> {
    match desc {
        SheafDescriptor::LineBundle { twists } if twists.len() == 1 => Ok((1, twists[0] * d)),
        SheafDescriptor::SemistableEC { rank, degree, .. } => Ok((*rank as i64, *degree)),
        SheafDescriptor::DirectSum(parts) => {
            let mut acc = (0, 0);
            for (p, m) in parts {
                let (r, deg) = elliptic_rank_degree(p, d)?;
                acc = (acc.0 + *m as i64 * r, acc.1 + *m as i64 * deg);
            }
            Ok(acc)
        }
        _ => Err(Error::Indeterminate(format!("{desc} has no rank/degree"))),
    }
}

pub fn k0_class_of_sheaf(desc: &SheafDescriptor, model: &VarietyModel) -> Result<K0Class> {
    desc.validate(model)?;
    if let ModelKind::EllipticCurve { d } = model.kind() {
        let (r, deg) = elliptic_rank_degree(desc, d as i64)?;
        return Ok(K0Class(vec![r, deg]));
    }
    let mut out = Vec::new();
    for t in probe_twists(model)? {
        let col = column(desc, model, t).map_err(|e| match e {
            Error::NoOracle(m) => Error::Indeterminate(m),
            e => e,
        })?;
        out.push(col.iter().enumerate().map(|(i, h)| if i % 2 == 0 { *h as i64 } else { -(*h as i64) }).sum());
    }
    Ok(K0Class(out))
}

/// Alternating sum of the classes of the cohomology sheaves.
pub fn k0_class(complex: &FormalComplex) -> Result<K0Class> {
    let model = complex.model();
    let len = match model.kind() {
        ModelKind::EllipticCurve { .. } => 2,
        _ => probe_twists(model)?.len(),
    };
    let mut acc = vec![0; len];
    for (deg, desc) in complex.sheaves() {
        let sign = if deg.rem_euclid(2) == 0 { 1 } else { -1 };
        for (a, x) in acc.iter_mut().zip(k0_class_of_sheaf(desc, model)?.0) {
            *a += sign * x;
        }
    }
    Ok(K0Class(acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum GateVerdict {
    /// The classes span a full-rank sublattice. Nothing further is claimed.
    FullRank { rank: u32, needed: u32 },
    /// The objects cannot classically generate.
    DeficientRank { rank: u32, needed: u32 },
}

impl GateVerdict {
    pub fn rank(&self) -> u32 {
        match self {
            GateVerdict::FullRank { rank, .. } | GateVerdict::DeficientRank { rank, .. } => *rank,
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, GateVerdict::FullRank { .. })
    }
}

/// A classical generator's classes must span the numerical K-lattice.
pub fn generator_gate(objects: &[FormalComplex], model: &VarietyModel) -> Result<GateVerdict> {
    let needed = model
        .k0_rank()
        .ok_or_else(|| Error::UnknownK0Rank(model.to_string()))?;
    let mut rows = Vec::new();
    for obj in objects {
        if obj.model() != model {
            return Err(Error::ModelMismatch(model.to_string(), obj.model().to_string()));
        }
        rows.push(k0_class(obj)?.0);
    }
    let rank = lattice::rank(&rows) as u32;
    Ok(if rank >= needed {
        GateVerdict::FullRank { rank, needed }
    } else {
        GateVerdict::DeficientRank { rank, needed }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MembershipWitness {
    pub member: usize,
    /// Degree `k` with `Hom^k(member, E) ≠ 0`.
    pub k: i64,
    pub dim: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<MembershipWitness>,
}

/// `E ∈ ⟨members⟩^⊥`, i.e. `Hom^•(M, E) = 0` for every listed member `M`.
pub fn orthogonal_membership(complex: &FormalComplex, members: &[SheafDescriptor]) -> Result<Membership> {
    let model = complex.model();
    for (idx, m) in members.iter().enumerate() {
        let mut e2 = Vec::new();
        for (q, desc) in complex.sheaves() {
            for p in 0..=model.dim() as i64 {
                let h = ext_dimension(m, desc, p, model).map_err(|e| match e {
                    Error::NoDualRule(msg) => Error::NoOracle(msg),
                    e => e,
                })?;
                if h > 0 {
                    e2.push((p, q, h));
                }
            }
        }
        if let Some(&(p, q, h)) = e2.first() {
            if e2_certificate(complex.is_glued(), &e2) == Certificate::UpperBoundOnly {
                return Err(Error::IncompleteTable(format!(
                    "Hom^•({m}, E) is only bounded above"
                )));
            }
            let k = p + q;
            let dim = e2.iter().filter(|(p2, q2, _)| p2 + q2 == k).map(|x| x.2).sum();
            debug_assert!(dim >= h);
            return Ok(Membership {
                member: false,
                witness: Some(MembershipWitness { member: idx, k, dim }),
            });
        }
    }
    Ok(Membership {
        member: true,
        witness: None,
    })
}

/// A line bundle of degree `d` not isomorphic to `𝒪_E(1)`; its degree-0
/// twist is a nontrivial line bundle, so it is Ulrich.
pub fn elliptic_witness(model: &VarietyModel) -> Result<(SheafDescriptor, UlrichVerdict)> {
    elliptic_witness_forced(model, false)
}

/// Same construction with the triviality flag of the degree-0 twist chosen by
/// the caller; `true` gives `𝒪_E(1)` itself.
pub fn elliptic_witness_forced(model: &VarietyModel, trivial: bool) -> Result<(SheafDescriptor, UlrichVerdict)> {
    let ModelKind::EllipticCurve { d } = model.kind() else {
        return Err(Error::UnsupportedModel(format!("elliptic witness on {model}")));
    };
    let desc = SheafDescriptor::ss(1, d as i64, Some(trivial));
    let verdict = is_ulrich_sheaf(&desc, model)?;
    Ok((desc, verdict))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::Witness;

    fn pn(n: u32) -> VarietyModel {
        VarietyModel::proj(n).unwrap()
    }

    fn obj(model: VarietyModel, desc: SheafDescriptor) -> FormalComplex {
        FormalComplex::sheaf(model, desc, 0).unwrap()
    }

    #[test]
    fn k0_examples() {
        let e3 = VarietyModel::elliptic(3).unwrap();
        assert_eq!(k0_class(&obj(e3, SheafDescriptor::line(1))).unwrap(), K0Class(vec![1, 3]));
        let o = SheafDescriptor::structure();
        let c = FormalComplex::from_sheaves(e3, [(0, o.clone()), (-1, o.clone())]).unwrap();
        assert_eq!(k0_class(&c).unwrap(), K0Class(vec![0, 0]));
        let e = obj(pn(2), SheafDescriptor::line(2));
        assert_eq!(k0_class(&e.shift(1)).unwrap(), k0_class(&e).unwrap().negate());
        let s = VarietyModel::surface(4, 0, 2).unwrap();
        assert!(matches!(
            k0_class(&FormalComplex::zero(s)),
            Err(Error::Indeterminate(_))
        ));
    }

    #[test]
    fn gate_examples() {
        let e3 = VarietyModel::elliptic(3).unwrap();
        let g = generator_gate(&[obj(e3, SheafDescriptor::line(1))], &e3).unwrap();
        assert_eq!(g, GateVerdict::DeficientRank { rank: 1, needed: 2 });
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"verdict":"DeficientRank","rank":1,"needed":2}"#
        );
        let g = generator_gate(
            &[obj(e3, SheafDescriptor::structure()), obj(e3, SheafDescriptor::line(1))],
            &e3,
        )
        .unwrap();
        assert!(g.is_full());
        for n in 1..=5 {
            let objs: Vec<_> = (1..=n as i64).map(|k| obj(pn(n), SheafDescriptor::line(k))).collect();
            assert_eq!(
                generator_gate(&objs, &pn(n)).unwrap(),
                GateVerdict::DeficientRank { rank: n, needed: n + 1 }
            );
        }
        let s = VarietyModel::surface(4, 0, 2).unwrap();
        assert!(matches!(generator_gate(&[], &s), Err(Error::UnknownK0Rank(_))));
    }

    #[test]
    fn collections() {
        for n in 1..=4 {
            let b = Collection::beilinson(pn(n)).unwrap();
            assert!(b.unverified.is_empty());
            let objs: Vec<_> = b.members.iter().map(|m| obj(pn(n), m.clone())).collect();
            assert!(generator_gate(&objs, &pn(n)).unwrap().is_full());
        }
        let q2 = VarietyModel::quadric(2).unwrap();
        let k = Collection::kapranov(q2).unwrap();
        assert_eq!(k.members.len(), 4);
        assert!(k.unverified.is_empty());
        let q3 = VarietyModel::quadric(3).unwrap();
        let k = Collection::kapranov(q3).unwrap();
        assert_eq!(k.members.len(), 4);
        assert_eq!(k.unverified, vec![(1, 1)]);
        let reversed = vec![SheafDescriptor::line(1), SheafDescriptor::structure()];
        assert!(Collection::register(pn(2), reversed, CollectionKind::Custom).is_err());
    }

    #[test]
    fn membership_examples() {
        let members = [SheafDescriptor::line(1), SheafDescriptor::line(2)];
        let e = FormalComplex::sheaf(pn(2), SheafDescriptor::structure(), -3).unwrap();
        assert!(orthogonal_membership(&e, &members).unwrap().member);
        let f = obj(pn(2), SheafDescriptor::line(1));
        let m = orthogonal_membership(&f, &members).unwrap();
        assert!(!m.member);
        assert_eq!(m.witness, Some(MembershipWitness { member: 0, k: 0, dim: 1 }));
    }

    #[test]
    fn elliptic_witnesses() {
        for d in [3, 5] {
            let model = VarietyModel::elliptic(d).unwrap();
            let (desc, v) = elliptic_witness(&model).unwrap();
            assert!(v.passed);
            assert_eq!(column(&desc, &model, Twist::Diag(0)).unwrap()[0], d as u64);
        }
        let model = VarietyModel::elliptic(3).unwrap();
        let (_, v) = elliptic_witness_forced(&model, true).unwrap();
        assert!(!v.passed);
        assert_eq!(v.witness(), Some(Witness { degree: None, i: 0, t: -1, h: 1 }));
    }
}
