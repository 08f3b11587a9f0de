//! Ulrich predicates for sheaves and complexes, decomposition reporters on
//! projective spaces and quadrics, an Ext oracle and Yoneda-type objects.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cohomology::{column, elliptic_table, spinor_table, SheafDescriptor, SpinorSign, Twist};
use crate::complexes::{hyper_column, hyper_table, Certificate, FormalComplex, Glue, Witness};
use crate::variety::{ModelKind, VarietyModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Direct,
    Sheafwise,
    Both,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Mode::Direct),
            "sheafwise" => Ok(Mode::Sheafwise),
            "both" => Ok(Mode::Both),
            _ => Err(Error::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

/// Whether a verdict holds for all twists or only on the probed window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scope {
    /// Line bundles, spinor bundles and semistable bundles on curves have
    /// monotone cohomology in the twist, so the window decides everything.
    Global,
    Window { lo: i64, hi: i64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub twists: (i64, i64),
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Certificate>,
}

impl Criterion {
    fn new(name: impl Into<String>, twists: (i64, i64), witness: Option<Witness>) -> Self {
        Criterion {
            name: name.into(),
            twists,
            witness,
            certificate: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UlrichVerdict {
    pub passed: bool,
    pub mode: Mode,
    pub scope: Scope,
    pub criteria: Vec<Criterion>,
}

impl UlrichVerdict {
    fn new(mode: Mode, scope: Scope, criteria: Vec<Criterion>) -> Self {
        UlrichVerdict {
            passed: criteria.iter().all(Criterion::passed),
            mode,
            scope,
            criteria,
        }
    }

    /// First failing criterion's witness.
    pub fn witness(&self) -> Option<Witness> {
        self.criteria.iter().find_map(|c| c.witness)
    }
}

/// Probing parameters. `None` picks the model default `[−(2·dim+5), dim+2]`
/// and a probe depth of `2·dim+5`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckOptions {
    pub window: Option<(i64, i64)>,
    pub probe_depth: Option<i64>,
}

impl CheckOptions {
    fn window(&self, model: &VarietyModel) -> (i64, i64) {
        self.window.unwrap_or_else(|| model.default_window())
    }

    fn probe_depth(&self, model: &VarietyModel) -> i64 {
        self.probe_depth.unwrap_or(2 * model.dim() as i64 + 5)
    }
}

fn provably_global(desc: &SheafDescriptor) -> bool {
    match desc {
        SheafDescriptor::LineBundle { .. }
        | SheafDescriptor::Spinor { .. }
        | SheafDescriptor::SemistableEC { .. } => true,
        SheafDescriptor::DirectSum(parts) => parts.iter().all(|(d, _)| provably_global(d)),
        SheafDescriptor::ExternalTensor(l, r) => provably_global(l) && provably_global(r),
        SheafDescriptor::Abstract(_) => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Initialized {
    pub initialized: bool,
    pub witness: Option<Witness>,
    pub probed: (i64, i64),
}

/// `h⁰(E) ≠ 0` and `h⁰(E(t)) = 0` for `t ∈ [−probe_depth, −1]`.
pub fn is_initialized(desc: &SheafDescriptor, model: &VarietyModel, probe_depth: i64) -> Result<Initialized> {
    desc.validate(model)?;
    let h0 = |t: i64| -> Result<u64> { Ok(column(desc, model, Twist::Diag(t))?[0]) };
    let probed = (-probe_depth, 0);
    let at_zero = h0(0)?;
    if at_zero == 0 {
        return Ok(Initialized {
            initialized: false,
            witness: Some(Witness { degree: None, i: 0, t: 0, h: 0 }),
            probed,
        });
    }
    for t in (-probe_depth..=-1).rev() {
        let h = h0(t)?;
        if h > 0 {
            return Ok(Initialized {
                initialized: false,
                witness: Some(Witness { degree: None, i: 0, t, h }),
                probed,
            });
        }
    }
    Ok(Initialized {
        initialized: true,
        witness: None,
        probed,
    })
}

pub fn is_ulrich_sheaf(desc: &SheafDescriptor, model: &VarietyModel) -> Result<UlrichVerdict> {
    is_ulrich_sheaf_with(desc, model, &CheckOptions::default())
}

pub fn is_ulrich_sheaf_with(
    desc: &SheafDescriptor,
    model: &VarietyModel,
    opts: &CheckOptions,
) -> Result<UlrichVerdict> {
    desc.validate(model)?;
    let n = model.dim() as i64;
    let col = |t: i64| column(desc, model, Twist::Diag(t));
    let first_nonzero = |t: i64, range: std::ops::Range<usize>| -> Result<Option<Witness>> {
        let c = col(t)?;
        Ok(c[range.clone()]
            .iter()
            .zip(range)
            .find(|(h, _)| **h > 0)
            .map(|(h, i)| Witness { degree: None, i: i as i64, t, h: *h }))
    };

    let mut vanishing = None;
    for j in 1..=n {
        if let Some(w) = first_nonzero(-j, 0..n as usize + 1)? {
            vanishing = Some(w);
            break;
        }
    }

    let init = is_initialized(desc, model, opts.probe_depth(model))?;

    let h0 = col(0)?[0];
    let expected = model.deg() * desc.rank(model) as u64;
    let count = (h0 != expected).then_some(Witness { degree: None, i: 0, t: 0, h: h0 });

    let window = opts.window(model);
    let mut acm = None;
    if n >= 2 {
        for t in window.0..=window.1 {
            if let Some(w) = first_nonzero(t, 1..n as usize)? {
                acm = Some(w);
                break;
            }
        }
    }

    let scope = if provably_global(desc) {
        Scope::Global
    } else {
        Scope::Window { lo: window.0, hi: window.1 }
    };
    Ok(UlrichVerdict::new(
        Mode::Sheafwise,
        scope,
        vec![
            Criterion::new("vanishing", (-n, -1), vanishing),
            Criterion::new("initialized", init.probed, init.witness),
            Criterion::new("h0_equals_deg_rank", (0, 0), count),
            Criterion::new("intermediate_cohomology", window, acm),
        ],
    ))
}

fn direct_verdict(complex: &FormalComplex) -> Result<UlrichVerdict> {
    let n = complex.model().dim() as i64;
    let hyper = hyper_table(complex, (-n, -1))?;
    let witness = crate::complexes::ulrich_failure(&hyper.table, n as u32);
    let mut criterion = Criterion::new("hypercohomology_vanishing", (-n, -1), witness);
    criterion.certificate = Some(hyper.certificate_over(-n..=-1));
    Ok(UlrichVerdict::new(Mode::Direct, Scope::Global, vec![criterion]))
}

fn sheafwise_verdict(complex: &FormalComplex, opts: &CheckOptions) -> Result<UlrichVerdict> {
    let model = complex.model();
    let mut criteria = Vec::new();
    let mut global = true;
    for (deg, desc) in complex.sheaves() {
        let v = is_ulrich_sheaf_with(desc, model, opts)?;
        global &= v.scope == Scope::Global;
        let witness = v.witness().map(|w| Witness { degree: Some(deg), ..w });
        let window = opts.window(model);
        criteria.push(Criterion::new(format!("H^{deg} is Ulrich"), window, witness));
    }
    let window = opts.window(model);
    let scope = if global {
        Scope::Global
    } else {
        Scope::Window { lo: window.0, hi: window.1 }
    };
    Ok(UlrichVerdict::new(Mode::Sheafwise, scope, criteria))
}

pub fn is_ulrich_object(complex: &FormalComplex, mode: Mode) -> Result<UlrichVerdict> {
    is_ulrich_object_with(complex, mode, &CheckOptions::default())
}

/// Direct mode reads hypercohomology at twists `−1..−n`; sheafwise mode asks
/// every cohomology sheaf to be Ulrich. `Both` runs both and fails loudly on
/// disagreement.
pub fn is_ulrich_object_with(complex: &FormalComplex, mode: Mode, opts: &CheckOptions) -> Result<UlrichVerdict> {
    match mode {
        Mode::Direct => direct_verdict(complex),
        Mode::Sheafwise => sheafwise_verdict(complex, opts),
        Mode::Both => {
            let d = direct_verdict(complex)?;
            let s = sheafwise_verdict(complex, opts)?;
            if d.passed != s.passed {
                return Err(Error::ModeDisagreement {
                    direct: d.passed,
                    sheafwise: s.passed,
                });
            }
            let scope = s.scope;
            let criteria = d.criteria.into_iter().chain(s.criteria).collect();
            Ok(UlrichVerdict::new(Mode::Both, scope, criteria))
        }
    }
}

fn exact_column(complex: &FormalComplex, twist: Twist) -> Result<BTreeMap<i64, u64>> {
    let (col, cert) = hyper_column(complex, twist)?;
    if !cert.is_exact() {
        return Err(Error::IncompleteTable(format!(
            "hypercohomology at {twist:?} is only bounded above"
        )));
    }
    Ok(col)
}

fn require_ulrich(complex: &FormalComplex) -> Result<()> {
    let v = direct_verdict(complex)?;
    if !v.passed {
        let w = v.witness().expect("failed verdict has a witness");
        return Err(Error::NotUlrich(format!("h^{}(E({})) = {}", w.i, w.t, w.h)));
    }
    Ok(())
}

/// `m_i = h^i(E)` for an Ulrich object on `Pⁿ`, so that `E ≅ ⊕ 𝒪^{m_i}[−i]`.
pub fn pn_decompose(complex: &FormalComplex) -> Result<BTreeMap<i64, u64>> {
    if !matches!(complex.model().kind(), ModelKind::ProjSpace { .. }) {
        return Err(Error::UnsupportedModel(format!(
            "projective-space decomposition on {}",
            complex.model()
        )));
    }
    require_ulrich(complex)?;
    exact_column(complex, Twist::Diag(0))
}

/// `⊕ 𝒪^{m_i}[−i]`.
pub fn pn_reconstruct(model: VarietyModel, multiplicities: &BTreeMap<i64, u64>) -> Result<FormalComplex> {
    FormalComplex::from_sheaves(
        model,
        multiplicities
            .iter()
            .filter(|(_, m)| **m > 0)
            .map(|(i, m)| (*i, SheafDescriptor::structure().times(*m as u32))),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuadricDecomposition {
    /// `E ≅ ⊕ S^{m_i}[−i]` on `Q³`.
    Odd { spinor: BTreeMap<i64, u64> },
    /// `E ≅ ⊕ (S⁺)^{p_i}[−i] ⊕ (S⁻)^{q_i}[−i]` on `Q²`.
    Even {
        plus: BTreeMap<i64, u64>,
        minus: BTreeMap<i64, u64>,
    },
}

pub fn quadric_decompose(complex: &FormalComplex) -> Result<QuadricDecomposition> {
    let ModelKind::Quadric { n } = complex.model().kind() else {
        return Err(Error::UnsupportedModel(format!("quadric decomposition on {}", complex.model())));
    };
    if !matches!(n, 2 | 3) {
        return Err(Error::UnsupportedQuadricDim(n));
    }
    require_ulrich(complex)?;
    if n == 3 {
        let unit = spinor_table(3, None, 0)?[0];
        let mut spinor = BTreeMap::new();
        for (i, h) in exact_column(complex, Twist::Diag(0))? {
            if h % unit != 0 {
                return Err(Error::NonDivisibleRank { degree: i, dim: h, unit });
            }
            spinor.insert(i, h / unit);
        }
        return Ok(QuadricDecomposition::Odd { spinor });
    }
    // Hom^•(S⁺, −) = H^•(− ⊗ 𝒪(−1,0)) and Hom^•(S⁻, −) = H^•(− ⊗ 𝒪(0,−1)).
    let plus = exact_column(complex, Twist::Bi(-1, 0))?;
    let minus = exact_column(complex, Twist::Bi(0, -1))?;
    let total = exact_column(complex, Twist::Diag(0))?;
    for (i, h) in &total {
        let counted = 2 * (plus.get(i).unwrap_or(&0) + minus.get(i).unwrap_or(&0));
        if counted != *h {
            return Err(Error::NonDivisibleRank { degree: *i, dim: *h, unit: 2 });
        }
    }
    Ok(QuadricDecomposition::Even { plus, minus })
}

pub fn quadric_reconstruct(model: VarietyModel, decomposition: &QuadricDecomposition) -> Result<FormalComplex> {
    let mut terms = Vec::new();
    let mut push = |mults: &BTreeMap<i64, u64>, sign: Option<SpinorSign>| {
        for (i, m) in mults {
            if *m > 0 {
                terms.push((*i, SheafDescriptor::spinor(sign).times(*m as u32)));
            }
        }
    };
    match decomposition {
        QuadricDecomposition::Odd { spinor } => push(spinor, None),
        QuadricDecomposition::Even { plus, minus } => {
            push(plus, Some(SpinorSign::Plus));
            push(minus, Some(SpinorSign::Minus));
        }
    }
    FormalComplex::from_sheaves(model, terms)
}

// ---------------------------------------------------------------------------
// Ext groups.

/// Degree of a line-type descriptor on an elliptic curve.
fn elliptic_line_degree(desc: &SheafDescriptor, d: i64) -> Option<(u32, i64, Option<bool>)> {
    match desc {
        SheafDescriptor::LineBundle { twists } if twists.len() == 1 => {
            Some((1, twists[0] * d, Some(twists[0] == 0)))
        }
        SheafDescriptor::SemistableEC {
            rank,
            degree,
            trivial_type,
        } => Some((*rank, *degree, *trivial_type)),
        _ => None,
    }
}

/// `dim Ext^k(F, G) = h^k(F^∨ ⊗ G)`.
///
/// Dual rules: line bundles, the spinor line bundles on `Q²`, the spinor
/// bundle on `Q³` against line bundles, and line-type bundles on elliptic
/// curves. `F` may be a direct sum of those.
pub fn ext_dimension(f: &SheafDescriptor, g: &SheafDescriptor, k: i64, model: &VarietyModel) -> Result<u64> {
    f.validate(model)?;
    g.validate(model)?;
    let n = model.dim() as i64;
    if k < 0 || k > n {
        return Ok(0);
    }
    let k = k as usize;
    let no_rule = || Error::NoDualRule(format!("{f} on {model}"));
    match (f, model.kind()) {
        (SheafDescriptor::DirectSum(parts), _) => {
            let mut acc = 0;
            for (p, m) in parts {
                acc += *m as u64 * ext_dimension(p, g, k as i64, model)?;
            }
            Ok(acc)
        }
        (SheafDescriptor::LineBundle { .. }, ModelKind::EllipticCurve { d })
        | (SheafDescriptor::SemistableEC { .. }, ModelKind::EllipticCurve { d }) => {
            let d = d as i64;
            let (fr, fdeg, fflag) = elliptic_line_degree(f, d).ok_or_else(no_rule)?;
            if fr != 1 {
                return Err(no_rule());
            }
            let (gr, gdeg, gflag) = elliptic_line_degree(g, d)
                .ok_or_else(|| Error::NoOracle(format!("{g} on {model}")))?;
            let delta = gdeg - gr as i64 * fdeg;
            // A degree-0 twist of G ⊗ F^∨ is only known to be trivial when both
            // sides are powers of the polarization.
            let flag = match (f, g) {
                (SheafDescriptor::LineBundle { .. }, SheafDescriptor::LineBundle { .. }) => Some(delta == 0),
                (SheafDescriptor::LineBundle { .. }, _) if fflag == Some(true) && gr == 1 => gflag,
                _ => None,
            };
            let table = elliptic_table(delta, flag)?;
            Ok(table[k])
        }
        (SheafDescriptor::LineBundle { twists }, _) => {
            let twist = match twists.as_slice() {
                [a] => Twist::Diag(-a),
                [a, b] => Twist::Bi(-a, -b),
                _ => return Err(no_rule()),
            };
            Ok(column(g, model, twist)?[k])
        }
        (SheafDescriptor::Spinor { sign: Some(sign) }, ModelKind::Quadric { n: 2 }) => {
            let twist = match sign {
                SpinorSign::Plus => Twist::Bi(-1, 0),
                SpinorSign::Minus => Twist::Bi(0, -1),
            };
            Ok(column(g, model, twist)?[k])
        }
        (SheafDescriptor::Spinor { sign: None }, ModelKind::Quadric { n: 3 }) => match g {
            // S^∨ ≅ S(−1).
            SheafDescriptor::LineBundle { twists } if twists.len() == 1 => {
                Ok(spinor_table(3, None, twists[0] - 1)?[k])
            }
            _ => Err(Error::NoDualRule(format!("{f} against {g}"))),
        },
        _ => Err(no_rule()),
    }
}

/// `F ⊗ K_X` where the canonical bundle is a line bundle the oracles know.
fn twist_by_canonical(desc: &SheafDescriptor, model: &VarietyModel) -> Option<SheafDescriptor> {
    let (ka, kb) = match model.kind() {
        ModelKind::ProjSpace { n } => (-(n as i64) - 1, None),
        ModelKind::Quadric { n } => (-(n as i64), None),
        ModelKind::ProductProj { n1, n2 } => (-(n1 as i64) - 1, Some(-(n2 as i64) - 1)),
        ModelKind::EllipticCurve { .. } => return Some(desc.clone()),
        ModelKind::Rank1Surface { .. } => return None,
    };
    match desc {
        SheafDescriptor::LineBundle { twists } => match (twists.as_slice(), kb) {
            ([a], None) => Some(SheafDescriptor::line(a + ka)),
            ([a], Some(kb)) => Some(SheafDescriptor::line2(a + ka, a + kb)),
            ([a, b], None) => Some(SheafDescriptor::line2(a + ka, b + ka)),
            ([a, b], Some(kb)) => Some(SheafDescriptor::line2(a + ka, b + kb)),
            _ => None,
        },
        SheafDescriptor::Spinor { sign: Some(s) } if matches!(model.kind(), ModelKind::Quadric { n: 2 }) => {
            let (a, b) = match s {
                SpinorSign::Plus => (1, 0),
                SpinorSign::Minus => (0, 1),
            };
            Some(SheafDescriptor::line2(a - 2, b - 2))
        }
        SheafDescriptor::DirectSum(parts) => Some(SheafDescriptor::sum(
            parts
                .iter()
                .map(|(d, m)| Some((twist_by_canonical(d, model)?, *m)))
                .collect::<Option<Vec<_>>>()?,
        )),
        _ => None,
    }
}

/// `Ext^k(F, G) = Ext^{n−k}(G, F ⊗ K_X)^∨` dimension-wise. `None` when either
/// side has no oracle.
pub fn serre_consistent(f: &SheafDescriptor, g: &SheafDescriptor, k: i64, model: &VarietyModel) -> Result<Option<bool>> {
    let Some(fk) = twist_by_canonical(f, model) else {
        return Ok(None);
    };
    let lhs = match ext_dimension(f, g, k, model) {
        Ok(v) => v,
        Err(e) if e.is_unsupported() => return Ok(None),
        Err(e) => return Err(e),
    };
    let rhs = match ext_dimension(g, &fk, model.dim() as i64 - k, model) {
        Ok(v) => v,
        Err(e) if e.is_unsupported() => return Ok(None),
        Err(e) => return Err(e),
    };
    Ok(Some(lhs == rhs))
}

/// How the nonzero Ext class gluing a Yoneda object is justified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YonedaWitness {
    /// `Ext^m(F, G)` is computed and must be nonzero.
    Computed,
    /// The caller vouches for a nonzero class.
    Asserted,
}

/// The object with `𝓗⁰ = F`, `𝓗^{−m+1} = G` glued by a nonzero `η ∈ Ext^m(F, G)`.
pub fn yoneda_build(
    f: &SheafDescriptor,
    g: &SheafDescriptor,
    m: u32,
    model: &VarietyModel,
    witness: YonedaWitness,
) -> Result<FormalComplex> {
    if m <= 1 {
        return Err(Error::DegenerateYoneda);
    }
    for (name, desc) in [("F", f), ("G", g)] {
        if !is_ulrich_sheaf(desc, model)?.passed {
            return Err(Error::NotUlrichInput(format!("{name} = {desc}")));
        }
    }
    if m > model.dim() {
        return Err(Error::ZeroExt(m));
    }
    if witness == YonedaWitness::Computed && ext_dimension(f, g, m as i64, model)? == 0 {
        return Err(Error::ZeroExt(m));
    }
    let low = 1 - m as i64;
    FormalComplex::new(
        *model,
        BTreeMap::from([(0, f.clone()), (low, g.clone())]),
        vec![Glue {
            from: 0,
            to: low,
            nonzero: true,
        }],
    )
}
