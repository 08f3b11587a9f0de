//! Truncated Chern characters, Hirzebruch–Riemann–Roch and the Ulrich
//! Chern-character constraints on surfaces.
//!
//! A [`NumClass`] records `ch` numerically along the polarization `H`:
//! `e1 = ch₁·H^{dim−1} / H^dim` and, on surfaces, `e2 = ch₂ / H²`. On models
//! whose canonical class is a multiple of `H` this is all Riemann–Roch sees.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::{factor_models, SheafDescriptor, SpinorSign};
use crate::complexes::FormalComplex;
use crate::rational::{self, q, qi, Rational};
use crate::variety::{ModelKind, VarietyModel};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumClass {
    pub r: i64,
    #[serde(with = "rational")]
    pub e1: Rational,
    /// Absent on curves.
    #[serde(with = "rational::option", default, skip_serializing_if = "Option::is_none")]
    pub e2: Option<Rational>,
}

impl NumClass {
    pub fn new(r: i64, e1: Rational, e2: Option<Rational>) -> Self {
        NumClass { r, e1, e2 }
    }

    pub fn zero(model: &VarietyModel) -> Self {
        NumClass {
            r: 0,
            e1: Rational::zero(),
            e2: (model.dim() >= 2).then(Rational::zero),
        }
    }

    /// Class of `𝒪(k)`: `(1, k, k²/2)`.
    pub fn line(k: i64, model: &VarietyModel) -> Self {
        NumClass {
            r: 1,
            e1: qi(k),
            e2: (model.dim() >= 2).then(|| q(k * k, 2)),
        }
    }

    pub fn add(&self, other: &NumClass) -> NumClass {
        NumClass {
            r: self.r + other.r,
            e1: &self.e1 + &other.e1,
            e2: match (&self.e2, &other.e2) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
        }
    }

    pub fn scale(&self, m: i64) -> NumClass {
        let m_q = qi(m);
        NumClass {
            r: self.r * m,
            e1: &self.e1 * &m_q,
            e2: self.e2.as_ref().map(|e| e * &m_q),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0 && self.e1.is_zero() && self.e2.as_ref().is_none_or(Zero::is_zero)
    }
}

fn supported_dim(model: &VarietyModel) -> Result<()> {
    if model.dim() > 2 {
        return Err(Error::UnsupportedModel(format!(
            "Chern characters are truncated at dimension 2, {model} has dimension {}",
            model.dim()
        )));
    }
    Ok(())
}

/// Numerical class of a sheaf descriptor.
pub fn class_of(desc: &SheafDescriptor, model: &VarietyModel) -> Result<NumClass> {
    supported_dim(model)?;
    let surface = model.dim() == 2;
    match desc {
        SheafDescriptor::LineBundle { twists } => match (model.kind(), twists.as_slice()) {
            (ModelKind::ProductProj { n1: 1, n2: 1 }, [a, b]) | (ModelKind::Quadric { n: 2 }, [a, b]) => {
                // c1·H = a + b, ch2 = ab, H² = 2.
                Ok(NumClass::new(1, q(a + b, 2), Some(q(a * b, 2))))
            }
            (_, [k]) => Ok(NumClass::line(*k, model)),
            _ => Err(Error::InvalidDescriptor(format!("{desc} on {model}"))),
        },
        SheafDescriptor::Spinor { sign } => match (model.kind(), sign) {
            (ModelKind::Quadric { n: 2 }, Some(SpinorSign::Plus)) => {
                class_of(&SheafDescriptor::line2(1, 0), model)
            }
            (ModelKind::Quadric { n: 2 }, Some(SpinorSign::Minus)) => {
                class_of(&SheafDescriptor::line2(0, 1), model)
            }
            _ => Err(Error::InvalidDescriptor(format!("{desc} on {model}"))),
        },
        SheafDescriptor::SemistableEC { rank, degree, .. } => match model.kind() {
            ModelKind::EllipticCurve { d } => Ok(NumClass::new(*rank as i64, q(*degree, d as i64), None)),
            _ => Err(Error::InvalidDescriptor(format!("{desc} on {model}"))),
        },
        SheafDescriptor::DirectSum(parts) => {
            let mut acc = NumClass::zero(model);
            for (d, m) in parts {
                acc = acc.add(&class_of(d, model)?.scale(*m as i64));
            }
            Ok(acc)
        }
        SheafDescriptor::ExternalTensor(l, r) => match model.kind() {
            ModelKind::ProductProj { n1: 1, n2: 1 } => {
                let (p1, p2) = factor_models(1, 1);
                let (cl, cr) = (class_of(l, &p1)?, class_of(r, &p2)?);
                // ch(E ⊠ F) = ch(E)·ch(F); each factor is (rank, degree) on P¹.
                let c1h = &cl.e1 * qi(cr.r) + &cr.e1 * qi(cl.r);
                Ok(NumClass::new(cl.r * cr.r, c1h / qi(2), Some(&cl.e1 * &cr.e1 / qi(2))))
            }
            _ => Err(Error::UnsupportedModel(format!("external product class on {model}"))),
        },
        SheafDescriptor::Abstract(a) => {
            let c = a
                .num_class
                .clone()
                .ok_or_else(|| Error::Indeterminate(format!("{} has no numerical class", a.label)))?;
            if surface != c.e2.is_some() {
                return Err(Error::Indeterminate(format!("{} class has the wrong length", a.label)));
            }
            Ok(c)
        }
    }
}

/// `ch₀ = Σ(−1)^i rk 𝓗^i`, likewise for the higher terms.
pub fn class_of_complex(complex: &FormalComplex) -> Result<NumClass> {
    let model = complex.model();
    let mut acc = NumClass::zero(model);
    for (deg, desc) in complex.sheaves() {
        let sign = if deg.rem_euclid(2) == 0 { 1 } else { -1 };
        acc = acc.add(&class_of(desc, model)?.scale(sign));
    }
    Ok(acc)
}

/// `ch · e^{kH}`.
pub fn twist_class(c: &NumClass, k: i64) -> NumClass {
    let kq = qi(k);
    NumClass {
        r: c.r,
        e1: &c.e1 + qi(c.r) * &kq,
        e2: c
            .e2
            .as_ref()
            .map(|e2| e2 + &c.e1 * &kq + qi(c.r) * &kq * &kq / qi(2)),
    }
}

/// Riemann–Roch. Surfaces: `χ = e2·d − (i_X·d/2)·e1 + r·χ(𝒪)`;
/// curves: `χ = e1·d + r·χ(𝒪)`.
pub fn euler_char(c: &NumClass, model: &VarietyModel) -> Result<Rational> {
    match model.dim() {
        1 => Ok(&c.e1 * qi(model.deg() as i64) + qi(c.r * model.chi0())),
        2 => {
            let data = model.surface_data().ok_or_else(|| {
                Error::UnsupportedModel(format!("canonical class of {model} is not a multiple of H"))
            })?;
            let e2 = c
                .e2
                .as_ref()
                .ok_or_else(|| Error::Indeterminate("surface class without ch2".into()))?;
            Ok(e2 * qi(data.d) - q(data.i_x * data.d, 2) * &c.e1 + qi(c.r * data.chi0))
        }
        _ => Err(Error::UnsupportedModel(format!(
            "Riemann–Roch is only wired for curves and surfaces, not {model}"
        ))),
    }
}

/// Solves `χ(E(−1)) = χ(E(−2)) = 0` for `(e1, e2)` at fixed rank `r`.
///
/// The system is assembled by evaluating [`euler_char`] on probe classes and
/// solved by Gaussian elimination. Any `r` is accepted; `r ≤ 0` solutions are
/// purely numerical.
pub fn ulrich_chern_solve(model: &VarietyModel, r: i64) -> Result<NumClass> {
    if model.surface_data().is_none() {
        return Err(Error::UnsupportedModel(format!(
            "Ulrich Chern constraints are solved on surfaces with K = i·H, not {model}"
        )));
    }
    let chi_at = |e1: Rational, e2: Rational, k: i64| -> Result<Rational> {
        euler_char(&twist_class(&NumClass::new(r, e1, Some(e2)), -k), model)
    };
    // Affine in (e1, e2): χ = a·e1 + b·e2 + c.
    let mut rows = Vec::new();
    for k in 1..=2 {
        let c = chi_at(Rational::zero(), Rational::zero(), k)?;
        let a = chi_at(Rational::one(), Rational::zero(), k)? - &c;
        let b = chi_at(Rational::zero(), Rational::one(), k)? - &c;
        rows.push([a, b, -c]);
    }
    let sol = solve_2x2(rows)?;
    let [e1, e2] = sol;
    Ok(NumClass::new(r, e1, Some(e2)))
}

fn solve_2x2(mut rows: Vec<[Rational; 3]>) -> Result<[Rational; 2]> {
    // Partial pivoting on exact entries only needs a nonzero pivot.
    for col in 0..2 {
        let pivot = (col..2)
            .find(|&r| !rows[r][col].is_zero())
            .ok_or(Error::DegenerateSystem)?;
        rows.swap(col, pivot);
        let p = rows[col][col].clone();
        for x in rows[col].iter_mut() {
            *x = &*x / &p;
        }
        for other in 0..2 {
            if other != col {
                let f = rows[other][col].clone();
                let pivot_row = rows[col].clone();
                for (x, y) in rows[other].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Ok([rows[0][2].clone(), rows[1][2].clone()])
}

/// `χ(E(−j)) = 0` for `j = 1..=dim`: the Euler-characteristic shadow of the
/// Ulrich vanishing.
pub fn chern_admissible(c: &NumClass, model: &VarietyModel) -> Result<bool> {
    for j in 1..=model.dim() as i64 {
        if !euler_char(&twist_class(c, -j), model)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(d: i64, i: i64, chi: i64) -> VarietyModel {
        VarietyModel::surface(d, i, chi).unwrap()
    }

    #[test]
    fn line_classes() {
        let s = surface(3, -1, 1);
        assert_eq!(class_of(&SheafDescriptor::structure(), &s).unwrap(), NumClass::new(1, qi(0), Some(qi(0))));
        for k in -4..=4 {
            let direct = class_of(&SheafDescriptor::line(k), &s).unwrap();
            assert_eq!(direct, twist_class(&NumClass::line(0, &s), k));
            assert_eq!(direct.e2, Some(q(k * k, 2)));
        }
    }

    #[test]
    fn complex_class_alternates() {
        let p2 = VarietyModel::proj(2).unwrap();
        let c = FormalComplex::from_sheaves(
            p2,
            [(0, SheafDescriptor::structure()), (1, SheafDescriptor::structure())],
        )
        .unwrap();
        assert!(class_of_complex(&c).unwrap().is_zero());
    }

    #[test]
    fn twist_examples() {
        let s = surface(1, -3, 1);
        assert_eq!(twist_class(&NumClass::line(0, &s), 1), NumClass::new(1, qi(1), Some(q(1, 2))));
        let c = NumClass::new(2, qi(3), Some(qi(4)));
        assert_eq!(twist_class(&c, 0), c);
        assert_eq!(twist_class(&c, -1), NumClass::new(2, qi(1), Some(qi(2))));
        assert_eq!(twist_class(&twist_class(&c, 3), -5), twist_class(&c, -2));
    }

    #[test]
    fn euler_examples() {
        let s = surface(5, 2, -3);
        assert_eq!(euler_char(&NumClass::line(0, &s), &s).unwrap(), qi(-3));
        let e3 = VarietyModel::elliptic(3).unwrap();
        assert_eq!(euler_char(&NumClass::new(1, qi(3), None), &e3).unwrap(), qi(9));
        assert_eq!(euler_char(&NumClass::new(1, qi(1), None), &e3).unwrap(), qi(3));
        let p2 = surface(1, -3, 1);
        for k in -6..=6i64 {
            let expected = (k + 2) * (k + 1) / 2;
            assert_eq!(euler_char(&NumClass::line(k, &p2), &p2).unwrap(), qi(expected));
        }
        let p3 = VarietyModel::proj(3).unwrap();
        assert!(matches!(euler_char(&NumClass::line(0, &p3), &p3), Err(Error::UnsupportedModel(_))));
    }

    #[test]
    fn solve_examples() {
        let c = ulrich_chern_solve(&surface(4, 0, 2), 2).unwrap();
        assert_eq!(c, NumClass::new(2, qi(3), Some(qi(1))));
        let c = ulrich_chern_solve(&surface(1, -3, 1), 1).unwrap();
        assert_eq!(c, NumClass::line(0, &surface(1, -3, 1)));
        assert!(chern_admissible(&c, &surface(1, -3, 1)).unwrap());
        assert!(ulrich_chern_solve(&VarietyModel::elliptic(3).unwrap(), 1).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let e3 = VarietyModel::elliptic(3).unwrap();
        assert!(!chern_admissible(&NumClass::new(1, qi(0), None), &e3).unwrap());
        assert!(chern_admissible(&NumClass::new(1, qi(1), None), &e3).unwrap());
        let p2 = surface(1, -3, 1);
        assert!(!chern_admissible(&NumClass::line(1, &p2), &p2).unwrap());
    }

    #[test]
    fn numclass_json() {
        let c = NumClass::new(2, q(3, 2), Some(q(-1, 4)));
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"r":2,"e1":"3/2","e2":"-1/4"}"#);
        assert_eq!(serde_json::from_str::<NumClass>(&json).unwrap(), c);
        let curve = NumClass::new(1, qi(1), None);
        assert_eq!(serde_json::to_string(&curve).unwrap(), r#"{"r":1,"e1":"1"}"#);
    }
}
