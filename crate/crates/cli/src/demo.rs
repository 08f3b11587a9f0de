//! Built-in worked examples, each reduced to a single pass/fail line.

use serde::Serialize;

use ulrich_core::bridgeland::{central_charge, heart_gate, ulrich_charge_expanded, Convention, HeartVerdict};
use ulrich_core::chern::{chern_admissible, ulrich_chern_solve};
use ulrich_core::cohomology::{column, AbstractSheaf, SheafDescriptor, SpinorSign, Twist};
use ulrich_core::complexes::{external_product, FormalComplex, ProductSide};
use ulrich_core::generators::{elliptic_witness, generator_gate, Collection, GateVerdict};
use ulrich_core::rational::{q, qi};
use ulrich_core::ulrich::{is_ulrich_object, is_ulrich_sheaf, yoneda_build, Mode, YonedaWitness};
use ulrich_core::variety::VarietyModel;

#[derive(Debug, Serialize)]
pub struct DemoResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = Result<String, String>;
type Example = (&'static str, fn() -> Check);

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn structure_is_ulrich_on_pn() -> Check {
    for n in 1..=4 {
        let p = VarietyModel::proj(n).map_err(err)?;
        if !is_ulrich_sheaf(&SheafDescriptor::structure(), &p).map_err(err)?.passed {
            return Err(format!("O rejected on P^{n}"));
        }
        if is_ulrich_sheaf(&SheafDescriptor::line(1), &p).map_err(err)?.passed {
            return Err(format!("O(1) accepted on P^{n}"));
        }
    }
    Ok("O is Ulrich and O(1) is not on P^1..P^4".into())
}

fn spinors_on_quadrics() -> Check {
    let q3 = VarietyModel::quadric(3).map_err(err)?;
    let s = SheafDescriptor::spinor(None);
    let h0 = column(&s, &q3, Twist::Diag(0)).map_err(err)?[0];
    let q2 = VarietyModel::quadric(2).map_err(err)?;
    let plus = is_ulrich_sheaf(&SheafDescriptor::spinor(Some(SpinorSign::Plus)), &q2).map_err(err)?;
    let minus = is_ulrich_sheaf(&SheafDescriptor::spinor(Some(SpinorSign::Minus)), &q2).map_err(err)?;
    let s3 = is_ulrich_sheaf(&s, &q3).map_err(err)?;
    if s3.passed && plus.passed && minus.passed && h0 == 4 {
        Ok("S on Q3 (h0 = 4), S+ and S- on Q2".into())
    } else {
        Err(format!("Q3 {} / Q2 {} {} / h0 {h0}", s3.passed, plus.passed, minus.passed))
    }
}

fn products_of_p1() -> Check {
    let p1 = VarietyModel::proj(1).map_err(err)?;
    let o = FormalComplex::sheaf(p1, SheafDescriptor::structure(), 0).map_err(err)?;
    for side in [ProductSide::TwistFirst, ProductSide::TwistSecond] {
        let prod = external_product(&o, &o, side).map_err(err)?;
        if !is_ulrich_object(&prod, Mode::Both).map_err(err)?.passed {
            return Err(format!("{side:?} product rejected"));
        }
    }
    Ok("O(1,0) and O(0,1) on P1xP1".into())
}

fn elliptic_curves() -> Check {
    for d in 3..=6 {
        let model = VarietyModel::elliptic(d).map_err(err)?;
        let (desc, v) = elliptic_witness(&model).map_err(err)?;
        if !v.passed {
            return Err(format!("{desc} rejected on degree {d}"));
        }
        let o1 = FormalComplex::sheaf(model, SheafDescriptor::line(1), 0).map_err(err)?;
        if generator_gate(&[o1], &model).map_err(err)?.is_full() {
            return Err(format!("O(1) spans K0 on degree {d}"));
        }
    }
    Ok("degree-d line bundle witness, O(1) rank-deficient, d = 3..6".into())
}

fn beilinson_generates() -> Check {
    for n in 1..=4 {
        let p = VarietyModel::proj(n).map_err(err)?;
        let members = Collection::beilinson(p).map_err(err)?.members;
        let objs = members
            .into_iter()
            .map(|m| FormalComplex::sheaf(p, m, 0))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        match generator_gate(&objs, &p).map_err(err)? {
            GateVerdict::FullRank { .. } => {}
            other => return Err(format!("P^{n}: {other:?}")),
        }
    }
    Ok("O, ..., O(n) span K0(P^n), n = 1..4".into())
}

fn surface_chern_classes() -> Check {
    for (d, i, chi) in [(4, 0, 2), (1, -3, 1), (9, -1, 0)] {
        let model = VarietyModel::surface(d, i, chi).map_err(err)?;
        for r in 1..=3 {
            let c = ulrich_chern_solve(&model, r).map_err(err)?;
            if !chern_admissible(&c, &model).map_err(err)? {
                return Err(format!("rank {r} on (d={d}, i={i}) not admissible"));
            }
            let (s, t) = (q(-1, 3), q(5, 2));
            if central_charge(&c, &s, &t, &model).map_err(err)? != ulrich_charge_expanded(r, &s, &t, &model).map_err(err)? {
                return Err(format!("charge mismatch for rank {r}"));
            }
        }
    }
    Ok("solved classes are admissible and match the expanded charge".into())
}

fn yoneda_outside_heart() -> Check {
    let model = VarietyModel::surface(4, 0, 2).map_err(err)?;
    let f = SheafDescriptor::Abstract(AbstractSheaf::ulrich_on_surface(&model, 1).map_err(err)?);
    let g = SheafDescriptor::Abstract(AbstractSheaf::ulrich_on_surface(&model, 2).map_err(err)?);
    let y = yoneda_build(&f, &g, 2, &model, YonedaWitness::Asserted).map_err(err)?;
    if !is_ulrich_object(&y, Mode::Both).map_err(err)?.passed {
        return Err("Yoneda object rejected".into());
    }
    for s in [qi(-2), qi(0), qi(3)] {
        let r = heart_gate(&y, &s, Convention::PaperLiteral).map_err(err)?;
        if r.verdict == HeartVerdict::MaybeInHeart {
            return Err(format!("s = {s}: passes the heart filter"));
        }
    }
    Ok("Ulrich two-term object, never in a tilted heart".into())
}

pub fn run() -> Vec<DemoResult> {
    let checks: [Example; 7] = [
        ("structure_sheaf_on_pn", structure_is_ulrich_on_pn),
        ("spinors_on_quadrics", spinors_on_quadrics),
        ("products_of_p1", products_of_p1),
        ("elliptic_curves", elliptic_curves),
        ("beilinson_generates", beilinson_generates),
        ("surface_chern_classes", surface_chern_classes),
        ("yoneda_outside_heart", yoneda_outside_heart),
    ];
    checks
        .into_iter()
        .map(|(name, f)| match f() {
            Ok(detail) => DemoResult { name, passed: true, detail },
            Err(detail) => DemoResult { name, passed: false, detail },
        })
        .collect()
}

pub fn to_tsv(results: &[DemoResult]) -> String {
    results
        .iter()
        .map(|r| format!("{}\t{}\t{}\n", r.name, if r.passed { "pass" } else { "fail" }, r.detail))
        .collect()
}
