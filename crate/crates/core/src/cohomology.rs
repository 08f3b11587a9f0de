//! Exact cohomology oracles for symbolic sheaves on the model varieties.
//!
//! A sheaf is a [`SheafDescriptor`]; its twisted cohomology is returned as a
//! column `h^0, …, h^dim` by [`column`] or as a [`CohomologyTable`] over a
//! window of diagonal twists by [`sheaf_table`].
//!
//! Line bundles on projective spaces use Bott's formula, quadrics use the long
//! exact sequence of the defining hypersurface, products use Künneth, elliptic
//! curves use genus-one Riemann–Roch plus a triviality bit in degree zero, and
//! the spinor bundle on `Q³` is obtained by induction along
//! `0 → S(−1) → 𝒪^4 → S → 0`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::chern::NumClass;
use crate::variety::{binomial, ModelKind, VarietyModel};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SpinorSign {
    Plus,
    Minus,
}

/// Symbolic coherent sheaf on a model variety.
#[derive(Debug, Clone, PartialEq)]
pub enum SheafDescriptor {
    /// `𝒪(k)`, or `𝒪(a,b)` on bidegree models. On an elliptic curve `𝒪(k)`
    /// means the `k`-th power of the polarizing bundle.
    LineBundle { twists: Vec<i64> },
    /// Ulrich-normalized spinor bundle on a quadric; the sign is required
    /// exactly when the dimension is even.
    Spinor { sign: Option<SpinorSign> },
    /// Semistable bundle on an elliptic curve. `trivial_type` records whether
    /// the bundle, twisted to degree zero, has a trivial-type summand.
    SemistableEC {
        rank: u32,
        degree: i64,
        trivial_type: Option<bool>,
    },
    DirectSum(Vec<(SheafDescriptor, u32)>),
    /// `left ⊠ right` on `P^{n1} × P^{n2}`.
    ExternalTensor(Box<SheafDescriptor>, Box<SheafDescriptor>),
    Abstract(AbstractSheaf),
}

/// A sheaf known only through its numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct AbstractSheaf {
    pub label: String,
    pub rank: u32,
    pub num_class: Option<NumClass>,
    pub table: Option<CohomologyTable>,
}

/// Twist applied before taking cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Twist {
    /// `⊗ 𝒪(t)` for the polarization.
    Diag(i64),
    /// `⊗ 𝒪(a,b)` on bidegree models.
    Bi(i64, i64),
}

impl Twist {
    fn bi(self) -> (i64, i64) {
        match self {
            Twist::Diag(t) => (t, t),
            Twist::Bi(a, b) => (a, b),
        }
    }

    pub fn negate(self) -> Twist {
        match self {
            Twist::Diag(t) => Twist::Diag(-t),
            Twist::Bi(a, b) => Twist::Bi(-a, -b),
        }
    }
}

impl SheafDescriptor {
    pub fn line(k: i64) -> Self {
        SheafDescriptor::LineBundle { twists: vec![k] }
    }

    pub fn line2(a: i64, b: i64) -> Self {
        SheafDescriptor::LineBundle { twists: vec![a, b] }
    }

    pub fn structure() -> Self {
        Self::line(0)
    }

    pub fn spinor(sign: Option<SpinorSign>) -> Self {
        SheafDescriptor::Spinor { sign }
    }

    pub fn ss(rank: u32, degree: i64, trivial_type: Option<bool>) -> Self {
        SheafDescriptor::SemistableEC {
            rank,
            degree,
            trivial_type,
        }
    }

    pub fn times(self, m: u32) -> Self {
        SheafDescriptor::sum([(self, m)])
    }

    /// Direct sum that merges equal summands and flattens nested sums.
    pub fn sum(parts: impl IntoIterator<Item = (SheafDescriptor, u32)>) -> Self {
        let mut out: Vec<(SheafDescriptor, u32)> = Vec::new();
        fn push(out: &mut Vec<(SheafDescriptor, u32)>, d: SheafDescriptor, m: u32) {
            match d {
                SheafDescriptor::DirectSum(inner) => {
                    for (d2, m2) in inner {
                        push(out, d2, m * m2);
                    }
                }
                d => match out.iter_mut().find(|(e, _)| *e == d) {
                    Some((_, k)) => *k += m,
                    None => out.push((d, m)),
                },
            }
        }
        for (d, m) in parts {
            if m > 0 {
                push(&mut out, d, m);
            }
        }
        if out.len() == 1 && out[0].1 == 1 {
            return out.pop().unwrap().0;
        }
        SheafDescriptor::DirectSum(out)
    }

    pub fn rank(&self, model: &VarietyModel) -> u32 {
        match self {
            SheafDescriptor::LineBundle { .. } => 1,
            SheafDescriptor::Spinor { .. } => match model.kind() {
                ModelKind::Quadric { n } => 1 << ((n - 1) / 2),
                _ => 0,
            },
            SheafDescriptor::SemistableEC { rank, .. } => *rank,
            SheafDescriptor::DirectSum(parts) => parts.iter().map(|(d, m)| m * d.rank(model)).sum(),
            SheafDescriptor::ExternalTensor(l, r) => match model.kind() {
                ModelKind::ProductProj { n1, n2 } => {
                    let (p1, p2) = factor_models(n1, n2);
                    l.rank(&p1) * r.rank(&p2)
                }
                _ => 0,
            },
            SheafDescriptor::Abstract(a) => a.rank,
        }
    }

    /// Structural validity of the descriptor on `model`.
    pub fn validate(&self, model: &VarietyModel) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidDescriptor(msg));
        match self {
            SheafDescriptor::LineBundle { twists } => {
                let ok = twists.len() == model.twist_len()
                    || (model.has_bidegrees() && matches!(twists.len(), 1 | 2));
                if !ok {
                    return bad(format!("{self} has the wrong number of twists for {model}"));
                }
                Ok(())
            }
            SheafDescriptor::Spinor { sign } => match model.kind() {
                ModelKind::Quadric { n } => {
                    if (n % 2 == 0) != sign.is_some() {
                        return bad(format!(
                            "spinor sign is required exactly on even-dimensional quadrics ({model})"
                        ));
                    }
                    Ok(())
                }
                _ => bad(format!("spinor bundles live on quadrics, not {model}")),
            },
            SheafDescriptor::SemistableEC { rank, .. } => {
                if !matches!(model.kind(), ModelKind::EllipticCurve { .. }) {
                    return bad(format!("semistable elliptic bundle on {model}"));
                }
                if *rank == 0 {
                    return bad("semistable elliptic bundle of rank 0".into());
                }
                Ok(())
            }
            SheafDescriptor::DirectSum(parts) => {
                if parts.is_empty() {
                    return bad("empty direct sum".into());
                }
                for (d, m) in parts {
                    if *m == 0 {
                        return bad("direct-sum multiplicity 0".into());
                    }
                    d.validate(model)?;
                }
                Ok(())
            }
            SheafDescriptor::ExternalTensor(l, r) => match model.kind() {
                ModelKind::ProductProj { n1, n2 } => {
                    let (p1, p2) = factor_models(n1, n2);
                    l.validate(&p1)?;
                    r.validate(&p2)
                }
                _ => bad(format!("external tensor product on {model}")),
            },
            SheafDescriptor::Abstract(_) => Ok(()),
        }
    }

    /// Parses the descriptor grammar: `+`-separated terms `[m*]atom` with atoms
    /// `O(k)`, `O(a,b)`, `S`, `S+`, `S-`, `ss(r,d)`, `ss(r,d,triv|nontriv)`,
    /// `U(r)` (abstract Ulrich sheaf of rank `r` on a surface) and
    /// `box(<left>|<right>)` for external products.
    pub fn parse(s: &str, model: &VarietyModel) -> Result<Self> {
        let terms = split_top_level(s, '+');
        let mut parts = Vec::new();
        for term in terms {
            let term = term.trim();
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let (mult, atom) = match term.split_once('*') {
                Some((m, a)) if !m.contains('(') => (
                    m.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad multiplicity in {term:?}")))?,
                    a.trim(),
                ),
                _ => (1, term),
            };
            parts.push((parse_atom(atom, model)?, mult));
        }
        let desc = if parts.len() == 1 && parts[0].1 == 1 {
            parts.pop().unwrap().0
        } else {
            SheafDescriptor::DirectSum(parts)
        };
        desc.validate(model)?;
        Ok(desc)
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes: Vec<(usize, char)> = s.char_indices().collect();
    for (idx, c) in bytes {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                // `S+` and `S-` carry their sign as a suffix, not a separator.
                let prev = s[..idx].trim_end();
                let next = s[idx + c.len_utf8()..].trim_start();
                if sep == '+' && prev.ends_with('S') && (next.is_empty() || next.starts_with('+')) {
                    continue;
                }
                out.push(&s[start..idx]);
                start = idx + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Splits on commas outside parentheses.
pub fn split_list(s: &str) -> Vec<&str> {
    split_top_level(s, ',')
}

fn parse_atom(atom: &str, model: &VarietyModel) -> Result<SheafDescriptor> {
    let bad = || Error::Parse(format!("bad sheaf descriptor {atom:?}"));
    let args = |prefix: &str| -> Option<Vec<String>> {
        let inner = atom.strip_prefix(prefix)?.strip_suffix(')')?;
        Some(inner.split(',').map(|x| x.trim().to_string()).collect())
    };
    let ints = |v: &[String]| -> Result<Vec<i64>> {
        v.iter().map(|x| x.parse::<i64>().map_err(|_| bad())).collect()
    };
    match atom {
        "S" => return Ok(SheafDescriptor::spinor(None)),
        "S+" => return Ok(SheafDescriptor::spinor(Some(SpinorSign::Plus))),
        "S-" => return Ok(SheafDescriptor::spinor(Some(SpinorSign::Minus))),
        _ => {}
    }
    if let Some(inner) = atom.strip_prefix("box(").and_then(|x| x.strip_suffix(')')) {
        let ModelKind::ProductProj { n1, n2 } = model.kind() else {
            return Err(Error::InvalidDescriptor(format!("{atom} needs a product model")));
        };
        let (l, r) = inner.split_once('|').ok_or_else(bad)?;
        let (p1, p2) = factor_models(n1, n2);
        return Ok(SheafDescriptor::ExternalTensor(
            Box::new(SheafDescriptor::parse(l, &p1)?),
            Box::new(SheafDescriptor::parse(r, &p2)?),
        ));
    }
    if let Some(v) = args("O(") {
        return Ok(SheafDescriptor::LineBundle { twists: ints(&v)? });
    }
    if let Some(v) = args("ss(") {
        if v.len() < 2 || v.len() > 3 {
            return Err(bad());
        }
        let n = ints(&v[..2])?;
        let flag = match v.get(2).map(String::as_str) {
            None => None,
            Some("triv") => Some(true),
            Some("nontriv") => Some(false),
            Some(_) => return Err(bad()),
        };
        let rank = u32::try_from(n[0]).map_err(|_| bad())?;
        return Ok(SheafDescriptor::ss(rank, n[1], flag));
    }
    if let Some(v) = args("U(") {
        let r = v.first().and_then(|x| x.parse::<u32>().ok()).ok_or_else(bad)?;
        return Ok(SheafDescriptor::Abstract(AbstractSheaf::ulrich_on_surface(model, r)?));
    }
    Err(bad())
}

impl fmt::Display for SheafDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafDescriptor::LineBundle { twists } => {
                let parts: Vec<String> = twists.iter().map(i64::to_string).collect();
                write!(f, "O({})", parts.join(","))
            }
            SheafDescriptor::Spinor { sign: None } => write!(f, "S"),
            SheafDescriptor::Spinor { sign: Some(SpinorSign::Plus) } => write!(f, "S+"),
            SheafDescriptor::Spinor { sign: Some(SpinorSign::Minus) } => write!(f, "S-"),
            SheafDescriptor::SemistableEC {
                rank,
                degree,
                trivial_type,
            } => match trivial_type {
                None => write!(f, "ss({rank},{degree})"),
                Some(true) => write!(f, "ss({rank},{degree},triv)"),
                Some(false) => write!(f, "ss({rank},{degree},nontriv)"),
            },
            SheafDescriptor::DirectSum(parts) => {
                for (idx, (d, m)) in parts.iter().enumerate() {
                    if idx > 0 {
                        write!(f, "+")?;
                    }
                    if *m != 1 {
                        write!(f, "{m}*")?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
            SheafDescriptor::ExternalTensor(l, r) => write!(f, "box({l}|{r})"),
            SheafDescriptor::Abstract(a) => write!(f, "{}", a.label),
        }
    }
}

impl AbstractSheaf {
    /// Ulrich sheaf of rank `r` on a Picard-rank-one surface, known through its
    /// Chern character and the table forced by Ulrichness:
    /// `χ(E(t)) = (r·d/2)(t+1)(t+2)`, all of it in `h⁰` for `t ≥ 0` and in `h²`
    /// for `t ≤ −3`.
    pub fn ulrich_on_surface(model: &VarietyModel, r: u32) -> Result<Self> {
        let data = model.surface_data().ok_or_else(|| {
            Error::UnsupportedModel(format!("abstract Ulrich sheaves need a surface, not {model}"))
        })?;
        let class = crate::chern::ulrich_chern_solve(model, r as i64)?;
        let (lo, hi) = (-60, 60);
        let mut entries = BTreeMap::new();
        for t in lo..=hi {
            let chi = (r as i64) * data.d * (t + 1) * (t + 2) / 2;
            if t >= 0 && chi != 0 {
                entries.insert((t, 0), chi as u64);
            } else if t <= -3 && chi != 0 {
                entries.insert((t, 2), chi as u64);
            }
        }
        Ok(AbstractSheaf {
            label: format!("U({r})"),
            rank: r,
            num_class: Some(class),
            table: Some(CohomologyTable {
                window: (lo, hi),
                entries,
                complete: true,
            }),
        })
    }
}

pub(crate) fn factor_models(n1: u32, n2: u32) -> (VarietyModel, VarietyModel) {
    (
        VarietyModel::proj(n1).expect("factor dimension >= 1"),
        VarietyModel::proj(n2).expect("factor dimension >= 1"),
    )
}

// ---------------------------------------------------------------------------
// Oracles.

/// `h^i(P^n, 𝒪(k))` for `i = 0..=n`.
pub fn bott_table(n: u32, k: i64) -> Vec<u64> {
    let n = n as i64;
    let mut col = vec![0; n as usize + 1];
    if k >= 0 {
        col[0] = binomial(n + k, n);
    }
    if k < -n {
        col[n as usize] = binomial(-k - 1, n);
    }
    col
}

/// `h^i(Q_n, 𝒪(k))` from `0 → 𝒪_{P^{n+1}}(k−2) → 𝒪_{P^{n+1}}(k) → 𝒪_Q(k) → 0`.
pub fn quadric_line_table(n: u32, k: i64) -> Vec<u64> {
    let big = n as usize + 1;
    let sub = bott_table(n + 1, k - 2);
    let amb = bott_table(n + 1, k);
    let mut col = vec![0; n as usize + 1];
    // H^0: 0 → H^0(k−2) → H^0(k) → H^0(Q(k)) → H^1(k−2) = 0.
    col[0] = amb[0] - sub[0];
    // H^n: 0 = H^n(k) → H^n(Q(k)) → H^{n+1}(k−2) → H^{n+1}(k) → 0.
    col[n as usize] += sub[big] - amb[big];
    col
}

/// Künneth: `h^i = Σ_{p+q=i} a_p·b_q`.
pub fn kunneth(left: &[u64], right: &[u64]) -> Vec<u64> {
    let mut col = vec![0; left.len() + right.len() - 1];
    for (p, a) in left.iter().enumerate() {
        for (q, b) in right.iter().enumerate() {
            col[p + q] += a * b;
        }
    }
    col
}

/// `h^i(P^{n1}×P^{n2}, 𝒪(a,b))`.
pub fn product_line_table(n1: u32, n2: u32, a: i64, b: i64) -> Vec<u64> {
    kunneth(&bott_table(n1, a), &bott_table(n2, b))
}

/// `(h⁰, h¹)` of a semistable bundle of degree `degree` on an elliptic curve.
pub fn elliptic_table(degree: i64, trivial_type: Option<bool>) -> Result<Vec<u64>> {
    Ok(match degree {
        d if d > 0 => vec![d as u64, 0],
        d if d < 0 => vec![0, (-d) as u64],
        _ => match trivial_type {
            Some(true) => vec![1, 1],
            Some(false) => vec![0, 0],
            None => return Err(Error::UnknownSlopeZero("degree-0 twist".into())),
        },
    })
}

/// Cohomology of the Ulrich-normalized spinor bundle(s) on `Q_n`, `n ∈ {2, 3}`.
pub fn spinor_table(n: u32, sign: Option<SpinorSign>, k: i64) -> Result<Vec<u64>> {
    match (n, sign) {
        (2, Some(SpinorSign::Plus)) => Ok(product_line_table(1, 1, 1 + k, k)),
        (2, Some(SpinorSign::Minus)) => Ok(product_line_table(1, 1, k, 1 + k)),
        (2, None) => Err(Error::InvalidDescriptor("spinor on Q² needs a sign".into())),
        (3, None) => Ok(spinor3(k).to_vec()),
        (3, Some(_)) => Err(Error::InvalidDescriptor("spinor on Q³ has no sign".into())),
        (n, _) => Err(Error::UnsupportedQuadricDim(n)),
    }
}

const SPINOR3_SECTIONS: u64 = 4;

/// Spinor bundle `S` on `Q³` with `0 → S(−1) → 𝒪^4 → S → 0`, `S^∨ ≅ S(−1)`.
///
/// Boundary data: `h⁰(S(−1)) = 0`. Serre duality reads
/// `h^i(S(t)) = h^{3−i}(S(−t−4))`.
fn spinor3(k: i64) -> [u64; 4] {
    let q = |t: i64| quadric_line_table(3, t);
    // Twists −1, −2, −3. O_Q(−1), O_Q(−2) are acyclic, so the sequence twisted
    // by −1 and −2 gives h^i(S(−1)) = h^{i+1}(S(−2)) = h^{i+2}(S(−3)), and
    // Serre duality turns the last into h^{1−i}(S(−1)).
    debug_assert!(q(-1).iter().chain(q(-2).iter()).all(|&h| h == 0));
    // With v_i = h^i(S(−1)) this reads v_i = v_{1−i}, zero outside 0..=3.
    let h0_boundary = 0;
    let base: [u64; 4] = std::array::from_fn(|i| match 1 - i as i64 {
        0 | 1 => h0_boundary,
        _ => 0,
    });
    if (-3..=-1).contains(&k) {
        return base;
    }
    if k <= -4 {
        let dual = spinor3(-k - 4);
        return [dual[3], dual[2], dual[1], dual[0]];
    }
    // Upward induction: if S(t−1) and O_Q(t) only have H^0, so does S(t) and
    // h^0(S(t)) = 4·h^0(O_Q(t)) − h^0(S(t−1)).
    let mut prev = base;
    for t in 0..=k {
        let ot = q(t);
        debug_assert!(ot[1..].iter().all(|&h| h == 0) && prev[1..].iter().all(|&h| h == 0));
        prev = [SPINOR3_SECTIONS * ot[0] - prev[0], 0, 0, 0];
    }
    prev
}

/// The twist at which the spinor bundle on `Q_n` first acquires sections,
/// scanned over `[−(2n+5), n+2]`. The normalization is correct when this is 0.
pub fn spinor_initialized_twist(n: u32, sign: Option<SpinorSign>) -> Result<Option<i64>> {
    let n_i = n as i64;
    for t in -(2 * n_i + 5)..=(n_i + 2) {
        if spinor_table(n, sign, t)?[0] > 0 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Twisted cohomology column `h^0..h^dim` of a descriptor.
pub fn column(desc: &SheafDescriptor, model: &VarietyModel, twist: Twist) -> Result<Vec<u64>> {
    let dim = model.dim() as usize;
    if let Twist::Bi(..) = twist {
        if !model.has_bidegrees() {
            return Err(Error::InvalidDescriptor(format!("bidegree twist on {model}")));
        }
    }
    match desc {
        SheafDescriptor::LineBundle { twists } => match model.kind() {
            ModelKind::ProjSpace { n } => match (twists.as_slice(), twist) {
                ([k], Twist::Diag(t)) => Ok(bott_table(n, k + t)),
                _ => Err(Error::InvalidDescriptor(format!("{desc} on {model}"))),
            },
            ModelKind::Quadric { n } => match (twists.as_slice(), twist) {
                ([k], Twist::Diag(t)) => Ok(quadric_line_table(n, k + t)),
                _ if n == 2 => {
                    let (a, b) = line_bidegree(twists)?;
                    let (x, y) = twist.bi();
                    Ok(product_line_table(1, 1, a + x, b + y))
                }
                _ => Err(Error::InvalidDescriptor(format!("{desc} on {model}"))),
            },
            ModelKind::ProductProj { n1, n2 } => {
                let (a, b) = line_bidegree(twists)?;
                let (x, y) = twist.bi();
                Ok(product_line_table(n1, n2, a + x, b + y))
            }
            ModelKind::EllipticCurve { d } => match (twists.as_slice(), twist) {
                ([k], Twist::Diag(t)) => elliptic_table((k + t) * d as i64, Some(k + t == 0)),
                _ => Err(Error::InvalidDescriptor(format!("{desc} on {model}"))),
            },
            ModelKind::Rank1Surface { .. } => Err(Error::NoOracle(format!(
                "{desc} on {model}: only abstract sheaves with explicit tables"
            ))),
        },
        SheafDescriptor::Spinor { sign } => match model.kind() {
            ModelKind::Quadric { n: 2 } => {
                let (a, b) = match sign {
                    Some(SpinorSign::Plus) => (1, 0),
                    Some(SpinorSign::Minus) => (0, 1),
                    None => return Err(Error::InvalidDescriptor("spinor on Q² needs a sign".into())),
                };
                let (x, y) = twist.bi();
                Ok(product_line_table(1, 1, a + x, b + y))
            }
            ModelKind::Quadric { n } => match twist {
                Twist::Diag(t) => spinor_table(n, *sign, t),
                Twist::Bi(..) => unreachable!("checked above"),
            },
            ModelKind::Rank1Surface { .. } => Err(Error::NoOracle(format!("{desc} on {model}"))),
            _ => Err(Error::InvalidDescriptor(format!("spinor bundle on {model}"))),
        },
        SheafDescriptor::SemistableEC {
            rank,
            degree,
            trivial_type,
        } => match (model.kind(), twist) {
            (ModelKind::EllipticCurve { d }, Twist::Diag(t)) => {
                let delta = degree + (*rank as i64) * t * d as i64;
                elliptic_table(delta, *trivial_type).map_err(|e| match e {
                    Error::UnknownSlopeZero(_) => Error::UnknownSlopeZero(format!("{desc} at twist {t}")),
                    e => e,
                })
            }
            (ModelKind::Rank1Surface { .. }, _) => Err(Error::NoOracle(format!("{desc} on {model}"))),
            _ => Err(Error::InvalidDescriptor(format!("{desc} on {model}"))),
        },
        SheafDescriptor::DirectSum(parts) => {
            let mut col = vec![0; dim + 1];
            for (d, m) in parts {
                for (acc, h) in col.iter_mut().zip(column(d, model, twist)?) {
                    *acc += *m as u64 * h;
                }
            }
            Ok(col)
        }
        SheafDescriptor::ExternalTensor(l, r) => match model.kind() {
            ModelKind::ProductProj { n1, n2 } => {
                let (p1, p2) = factor_models(n1, n2);
                let (x, y) = twist.bi();
                Ok(kunneth(&column(l, &p1, Twist::Diag(x))?, &column(r, &p2, Twist::Diag(y))?))
            }
            _ => Err(Error::InvalidDescriptor(format!("{desc} on {model}"))),
        },
        SheafDescriptor::Abstract(a) => {
            let (table, t) = match (&a.table, twist) {
                (Some(table), Twist::Diag(t)) => (table, t),
                (None, _) => {
                    return Err(Error::NoOracle(format!("{} has no explicit table", a.label)))
                }
                (_, Twist::Bi(..)) => {
                    return Err(Error::NoOracle(format!("{} has no bidegree table", a.label)))
                }
            };
            if t < table.window.0 || t > table.window.1 {
                return Err(Error::NoOracle(format!(
                    "twist {t} outside the explicit table of {}",
                    a.label
                )));
            }
            let mut col = vec![0; dim + 1];
            for (i, h) in table.column(t) {
                let slot = usize::try_from(i)
                    .ok()
                    .and_then(|i| col.get_mut(i))
                    .ok_or_else(|| Error::InvalidDescriptor(format!("{} has h^{i} outside 0..={dim}", a.label)))?;
                *slot = h;
            }
            Ok(col)
        }
    }
}

fn line_bidegree(twists: &[i64]) -> Result<(i64, i64)> {
    match twists {
        [k] => Ok((*k, *k)),
        [a, b] => Ok((*a, *b)),
        _ => Err(Error::InvalidDescriptor(format!("line bundle twists {twists:?}"))),
    }
}

/// Full table over a window of diagonal twists.
pub fn sheaf_table(
    desc: &SheafDescriptor,
    model: &VarietyModel,
    window: (i64, i64),
) -> Result<CohomologyTable> {
    desc.validate(model)?;
    let mut table = CohomologyTable::empty(window);
    for t in window.0..=window.1 {
        for (i, h) in column(desc, model, Twist::Diag(t))?.into_iter().enumerate() {
            table.set(i as i64, t, h);
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// Tables.

/// Exact dimensions `h^i(E(t))` over a twist window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyTable {
    pub window: (i64, i64),
    /// Nonzero entries keyed by `(t, i)`.
    entries: BTreeMap<(i64, i64), u64>,
    pub complete: bool,
}

impl CohomologyTable {
    pub fn empty(window: (i64, i64)) -> Self {
        CohomologyTable {
            window,
            entries: BTreeMap::new(),
            complete: true,
        }
    }

    pub fn set(&mut self, i: i64, t: i64, h: u64) {
        if h == 0 {
            self.entries.remove(&(t, i));
        } else {
            self.entries.insert((t, i), h);
        }
    }

    pub fn h(&self, i: i64, t: i64) -> u64 {
        self.entries.get(&(t, i)).copied().unwrap_or(0)
    }

    /// Nonzero `(i, h)` pairs at twist `t`, in increasing degree.
    pub fn column(&self, t: i64) -> Vec<(i64, u64)> {
        self.entries
            .range((t, i64::MIN)..=(t, i64::MAX))
            .map(|(&(_, i), &h)| (i, h))
            .collect()
    }

    pub fn euler(&self, t: i64) -> i64 {
        self.column(t)
            .into_iter()
            .map(|(i, h)| if i.rem_euclid(2) == 0 { h as i64 } else { -(h as i64) })
            .sum()
    }

    pub fn vanishes_at(&self, t: i64) -> bool {
        self.column(t).is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Iterates over nonzero entries as `(i, t, h)`.
    pub fn rows(&self) -> impl Iterator<Item = (i64, i64, u64)> + '_ {
        self.entries.iter().map(|(&(t, i), &h)| (i, t, h))
    }

    pub fn add(&self, other: &CohomologyTable) -> CohomologyTable {
        let window = (self.window.0.max(other.window.0), self.window.1.min(other.window.1));
        let mut out = self.restrict(window);
        for (i, t, h) in other.rows() {
            if t >= window.0 && t <= window.1 {
                out.set(i, t, out.h(i, t) + h);
            }
        }
        out.complete = self.complete && other.complete;
        out
    }

    pub fn scale(&self, m: u64) -> CohomologyTable {
        let mut out = CohomologyTable::empty(self.window);
        for (i, t, h) in self.rows() {
            out.set(i, t, h * m);
        }
        out.complete = self.complete;
        out
    }

    /// Table of `E[k]`: `h^i(E[k]) = h^{i+k}(E)`.
    pub fn shift(&self, k: i64) -> CohomologyTable {
        let mut out = CohomologyTable::empty(self.window);
        for (i, t, h) in self.rows() {
            out.set(i - k, t, h);
        }
        out.complete = self.complete;
        out
    }

    pub fn restrict(&self, window: (i64, i64)) -> CohomologyTable {
        let mut out = CohomologyTable::empty(window);
        for (i, t, h) in self.rows() {
            if t >= window.0 && t <= window.1 {
                out.set(i, t, h);
            }
        }
        out.complete = self.complete && window.0 >= self.window.0 && window.1 <= self.window.1;
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("i\tt\th\n");
        for (i, t, h) in self.rows() {
            out.push_str(&format!("{i}\t{t}\t{h}\n"));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TableRow {
    i: i64,
    t: i64,
    h: u64,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    window: [i64; 2],
    rows: Vec<TableRow>,
}

impl Serialize for CohomologyTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TableRepr {
            window: [self.window.0, self.window.1],
            rows: self.rows().map(|(i, t, h)| TableRow { i, t, h }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CohomologyTable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TableRepr::deserialize(d)?;
        if repr.window[0] > repr.window[1] {
            return Err(D::Error::custom("empty table window"));
        }
        let mut table = CohomologyTable::empty((repr.window[0], repr.window[1]));
        for row in repr.rows {
            table.set(row.i, row.t, row.h);
        }
        Ok(table)
    }
}
