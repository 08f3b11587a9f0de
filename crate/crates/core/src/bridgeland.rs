//! Divisorial stability numerics on surfaces: slopes, the tilting torsion
//! pair, the central charge `Z = −∫ e^{−(s+it)H} ch` and a necessary-condition
//! filter for membership in the tilted heart.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::chern::{class_of, class_of_complex, NumClass};
use crate::cohomology::SheafDescriptor;
use crate::complexes::FormalComplex;
use crate::rational::{self, q, qi, Rational};
use crate::variety::{SurfaceData, VarietyModel};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slope {
    Finite(Rational),
    Infinite,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(x) => f.write_str(&rational::format(x)),
            Slope::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `μ_H = c₁·H / (rk·H²) = e1/r`.
pub fn slope(c: &NumClass) -> Slope {
    if c.r == 0 {
        Slope::Infinite
    } else {
        Slope::Finite(&c.e1 / qi(c.r))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeValue {
    #[serde(with = "rational")]
    pub re: Rational,
    #[serde(with = "rational")]
    pub im: Rational,
}

impl ChargeValue {
    /// `Z ∈ ℍ ∪ ℝ_{<0}`.
    pub fn in_semi_closed_upper_half_plane(&self) -> bool {
        self.im.is_positive() || (self.im.is_zero() && self.re.is_negative())
    }

    pub fn phase_key(&self) -> PhaseKey {
        let sector = if self.im.is_positive() {
            Sector::Upper
        } else if self.im.is_negative() {
            Sector::Lower
        } else if self.re.is_negative() {
            Sector::NegativeReal
        } else if self.re.is_positive() {
            Sector::PositiveReal
        } else {
            Sector::Zero
        };
        let ratio = (!self.im.is_zero()).then(|| -&self.re / &self.im);
        PhaseKey { sector, ratio }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sector {
    Zero,
    PositiveReal,
    Upper,
    NegativeReal,
    Lower,
}

/// Exact stand-in for the phase `φ` with `Z = |Z|·e^{iπφ}`. In the upper
/// sector `−re/im = −cot(πφ)` is increasing in `φ ∈ (0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseKey {
    pub sector: Sector,
    #[serde(with = "rational::option", skip_serializing_if = "Option::is_none")]
    pub ratio: Option<Rational>,
}

fn surface(model: &VarietyModel) -> Result<SurfaceData> {
    model.surface_data().ok_or_else(|| {
        Error::UnsupportedModel(format!("divisorial stability needs a surface with K = i·H, not {model}"))
    })
}

fn check_t(t: &Rational) -> Result<()> {
    if t.is_positive() {
        Ok(())
    } else {
        Err(Error::NonpositiveT)
    }
}

/// `Z = −[e2·d − (s+it)·e1·d + (s+it)²·d·r/2]`.
pub fn central_charge(c: &NumClass, s: &Rational, t: &Rational, model: &VarietyModel) -> Result<ChargeValue> {
    check_t(t)?;
    let data = surface(model)?;
    let e2 = c
        .e2
        .as_ref()
        .ok_or_else(|| Error::Indeterminate("central charge needs ch2".into()))?;
    let d = qi(data.d);
    let r = qi(c.r);
    let half_dr = &d * &r / qi(2);
    let re = -(e2 * &d - s * &c.e1 * &d + (s * s - t * t) * &half_dr);
    let im = t * &d * (&c.e1 - s * &r);
    Ok(ChargeValue { re, im })
}

/// Closed form for the charge of a rank-`r` Ulrich class, as displayed in the
/// source: real part `−rχ + (rd/4)(i²+3i+4) + (rd/2)(s²−t²+(i+3)s)`,
/// imaginary part `(rd/2)(2s+i+3)t`.
///
/// This is `+∫ e^{(s+it)H} ch`, which differs from [`central_charge`] except
/// on special lines; the acceptance suite records the mismatch.
pub fn ulrich_charge_closed_form(r: i64, s: &Rational, t: &Rational, model: &VarietyModel) -> Result<ChargeValue> {
    check_t(t)?;
    let SurfaceData { d, i_x, chi0 } = surface(model)?;
    let rd = qi(r * d);
    let i = qi(i_x);
    let re = qi(-r * chi0)
        + &rd / qi(4) * qi(i_x * i_x + 3 * i_x + 4)
        + &rd / qi(2) * (s * s - t * t + (&i + qi(3)) * s);
    let im = &rd / qi(2) * (qi(2) * s + &i + qi(3)) * t;
    Ok(ChargeValue { re, im })
}

/// Closed form obtained by substituting the Ulrich class into
/// [`central_charge`]: real part `rχ − (rd/4)(i²+3i+4) + (rd/2)((i+3)s − s² + t²)`,
/// imaginary part `(rd/2)(i+3−2s)t`.
pub fn ulrich_charge_expanded(r: i64, s: &Rational, t: &Rational, model: &VarietyModel) -> Result<ChargeValue> {
    check_t(t)?;
    let SurfaceData { d, i_x, chi0 } = surface(model)?;
    let rd = qi(r * d);
    let i3 = qi(i_x + 3);
    let re = qi(r * chi0) - &rd / qi(4) * qi(i_x * i_x + 3 * i_x + 4)
        + &rd / qi(2) * (&i3 * s - s * s + t * t);
    let im = &rd / qi(2) * (&i3 - qi(2) * s) * t;
    Ok(ChargeValue { re, im })
}

/// The `s` at which the closed form's imaginary part vanishes, `−(i_X+3)/2`.
pub fn closed_form_wall(model: &VarietyModel) -> Result<Rational> {
    Ok(q(-(surface(model)?.i_x + 3), 2))
}

/// The `s` at which the charge of an Ulrich class is real, `(i_X+3)/2`: the
/// Ulrich slope.
pub fn ulrich_wall(model: &VarietyModel) -> Result<Rational> {
    Ok(q(surface(model)?.i_x + 3, 2))
}

/// How the slope is compared with `D = sH`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `μ_H ≤ D·H = s·d`.
    #[default]
    PaperLiteral,
    /// `μ_H ≤ s`.
    Normalized,
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-literal" => Ok(Convention::PaperLiteral),
            "normalized" => Ok(Convention::Normalized),
            _ => Err(Error::MissingConvention(s.to_string())),
        }
    }
}

impl Convention {
    pub fn threshold(self, s: &Rational, model: &VarietyModel) -> Result<Rational> {
        Ok(match self {
            Convention::PaperLiteral => s * qi(surface(model)?.d),
            Convention::Normalized => s.clone(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorsionSide {
    /// `μ ≤` threshold.
    F,
    /// `μ >` threshold, or torsion.
    T,
}

pub fn torsion_classify_class(c: &NumClass, s: &Rational, conv: Convention, model: &VarietyModel) -> Result<TorsionSide> {
    let threshold = conv.threshold(s, model)?;
    Ok(match slope(c) {
        Slope::Infinite => TorsionSide::T,
        Slope::Finite(mu) if mu <= threshold => TorsionSide::F,
        Slope::Finite(_) => TorsionSide::T,
    })
}

/// Side of the torsion pair for a semistable sheaf.
pub fn torsion_classify(desc: &SheafDescriptor, model: &VarietyModel, s: &Rational, conv: Convention) -> Result<TorsionSide> {
    let c = class_of(desc, model).map_err(|e| Error::NoSlope(format!("{desc}: {e}")))?;
    torsion_classify_class(&c, s, conv, model)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HeartObstruction {
    /// More than two nonzero cohomology sheaves after any shift.
    Amplitude,
    /// `𝓗^{−1}` and `𝓗⁰` have the same slope.
    EqualSlope,
    /// `𝓗^{−1}` is not in the torsion-free part.
    LowerNotF,
    /// `𝓗⁰` is not in the torsion part.
    UpperNotT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum HeartVerdict {
    MaybeInHeart,
    NotInHeart { reason: HeartObstruction },
}

/// Necessary conditions for `E[shift]` to lie in the tilted heart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeartReport {
    #[serde(flatten)]
    pub verdict: HeartVerdict,
    /// `E[shift]` is the candidate heart object.
    pub shift: i64,
    pub convention: Convention,
}

pub fn heart_gate(complex: &FormalComplex, s: &Rational, conv: Convention) -> Result<HeartReport> {
    let model = complex.model();
    let report = |verdict, shift| HeartReport {
        verdict,
        shift,
        convention: conv,
    };
    let Some((lo, hi)) = complex.amplitude() else {
        return Ok(report(HeartVerdict::MaybeInHeart, 0));
    };
    if hi - lo + 1 > 2 {
        return Ok(report(
            HeartVerdict::NotInHeart { reason: HeartObstruction::Amplitude },
            hi,
        ));
    }
    let class = |deg: i64| -> Result<NumClass> {
        let desc = complex.sheaf_at(deg).expect("degree in amplitude");
        class_of(desc, model).map_err(|e| Error::NoSlope(format!("{desc}: {e}")))
    };
    if lo == hi {
        let side = torsion_classify_class(&class(hi)?, s, conv, model)?;
        let shift = match side {
            TorsionSide::T => hi,
            TorsionSide::F => hi + 1,
        };
        return Ok(report(HeartVerdict::MaybeInHeart, shift));
    }
    let (lower, upper) = (class(lo)?, class(hi)?);
    let not_in = |reason| Ok(report(HeartVerdict::NotInHeart { reason }, hi));
    if slope(&lower) == slope(&upper) {
        return not_in(HeartObstruction::EqualSlope);
    }
    if torsion_classify_class(&lower, s, conv, model)? != TorsionSide::F {
        return not_in(HeartObstruction::LowerNotF);
    }
    if torsion_classify_class(&upper, s, conv, model)? != TorsionSide::T {
        return not_in(HeartObstruction::UpperNotT);
    }
    Ok(report(HeartVerdict::MaybeInHeart, hi))
}

/// One grid point of [`question_scan`]. No stability verdict is implied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    #[serde(serialize_with = "rational::serialize")]
    pub s: Rational,
    #[serde(serialize_with = "rational::serialize")]
    pub t: Rational,
    pub heart: HeartReport,
    /// `Z(E[shift])`.
    pub charge: ChargeValue,
    pub phase: PhaseKey,
    pub im_zero: bool,
}

pub fn question_scan(complex: &FormalComplex, grid: &[(Rational, Rational)], conv: Convention) -> Result<Vec<ScanRow>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut grid = grid.to_vec();
    grid.sort();
    grid.dedup();
    let model = complex.model();
    let class = class_of_complex(complex).map_err(|e| Error::NoSlope(e.to_string()))?;
    let mut rows = Vec::with_capacity(grid.len());
    for (s, t) in grid {
        let heart = heart_gate(complex, &s, conv)?;
        let sign = if heart.shift.rem_euclid(2) == 0 { 1 } else { -1 };
        let charge = central_charge(&class.scale(sign), &s, &t, model)?;
        rows.push(ScanRow {
            phase: charge.phase_key(),
            im_zero: charge.im.is_zero(),
            s,
            t,
            heart,
            charge,
        });
    }
    Ok(rows)
}

fn parse_range(spec: &str) -> Result<Vec<Rational>> {
    let bad = || Error::Parse(format!("range {spec:?}, expected lo..hi:step"));
    let (range, step) = spec.split_once(':').ok_or_else(bad)?;
    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
    let (lo, hi, step) = (rational::parse(lo)?, rational::parse(hi)?, rational::parse(step)?);
    if !step.is_positive() || hi < lo {
        return Err(bad());
    }
    let mut out = Vec::new();
    let mut x = lo;
    while x <= hi {
        out.push(x.clone());
        x += &step;
    }
    Ok(out)
}

/// Parses `s=lo..hi:step,t=lo..hi:step` into the product grid.
pub fn parse_grid(spec: &str) -> Result<Vec<(Rational, Rational)>> {
    let (mut ss, mut ts) = (None, None);
    for part in spec.split(',') {
        match part.trim().split_once('=') {
            Some(("s", r)) => ss = Some(parse_range(r)?),
            Some(("t", r)) => ts = Some(parse_range(r)?),
            _ => return Err(Error::Parse(format!("grid component {part:?}"))),
        }
    }
    let (ss, ts) = (
        ss.ok_or_else(|| Error::Parse("grid needs s=".into()))?,
        ts.ok_or_else(|| Error::Parse("grid needs t=".into()))?,
    );
    Ok(ss
        .iter()
        .flat_map(|s| ts.iter().map(move |t| (s.clone(), t.clone())))
        .collect())
}
