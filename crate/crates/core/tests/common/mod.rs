#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use ulrich_core::cohomology::{AbstractSheaf, SheafDescriptor, SpinorSign};
use ulrich_core::complexes::{FormalComplex, Glue};
use ulrich_core::variety::{ModelKind, VarietyModel};

pub fn models() -> Vec<VarietyModel> {
    vec![
        VarietyModel::proj(1).unwrap(),
        VarietyModel::proj(2).unwrap(),
        VarietyModel::proj(3).unwrap(),
        VarietyModel::quadric(2).unwrap(),
        VarietyModel::quadric(3).unwrap(),
        VarietyModel::product(1, 1).unwrap(),
        VarietyModel::elliptic(3).unwrap(),
        VarietyModel::elliptic(5).unwrap(),
        VarietyModel::surface(4, 0, 2).unwrap(),
        VarietyModel::surface(3, -1, 1).unwrap(),
    ]
}

/// Oracle-backed sheaves on `model`, Ulrich and otherwise.
pub fn pool(model: &VarietyModel) -> Vec<SheafDescriptor> {
    use SheafDescriptor as S;
    match model.kind() {
        ModelKind::ProjSpace { .. } => vec![S::structure(), S::line(1), S::line(-1), S::line(2), S::line(-4)],
        ModelKind::Quadric { n: 2 } => vec![
            S::spinor(Some(SpinorSign::Plus)),
            S::spinor(Some(SpinorSign::Minus)),
            S::line2(1, 0),
            S::structure(),
            S::line2(-1, 2),
            S::line(1),
        ],
        ModelKind::ProductProj { .. } => vec![S::line2(1, 0), S::line2(0, 1), S::line2(0, 0), S::line2(2, -1), S::line2(-3, -2)],
        ModelKind::Quadric { .. } => vec![S::spinor(None), S::structure(), S::line(1), S::line(-2)],
        ModelKind::EllipticCurve { d } => {
            let d = d as i64;
            vec![
                S::ss(1, d, Some(false)),
                S::ss(2, 2 * d, Some(false)),
                S::ss(1, d, Some(true)),
                S::line(1),
                S::structure(),
                S::ss(1, d + 1, None),
            ]
        }
        ModelKind::Rank1Surface { .. } => vec![
            S::Abstract(AbstractSheaf::ulrich_on_surface(model, 1).unwrap()),
            S::Abstract(AbstractSheaf::ulrich_on_surface(model, 2).unwrap()),
        ],
    }
}

/// A formal complex with up to `max_terms` nonzero degrees in `-3..=3`.
pub fn random_complex<R: Rng>(rng: &mut R, model: &VarietyModel, max_terms: usize) -> FormalComplex {
    random_complex_from(rng, model, max_terms, &pool(model))
}

/// Same as [`random_complex`] but only with Ulrich sheaves from the pool.
pub fn random_ulrich_complex<R: Rng>(rng: &mut R, model: &VarietyModel, max_terms: usize) -> FormalComplex {
    let ulrich: Vec<_> = pool(model)
        .into_iter()
        .filter(|d| ulrich_core::ulrich::is_ulrich_sheaf(d, model).unwrap().passed)
        .collect();
    random_complex_from(rng, model, max_terms, &ulrich)
}

pub fn random_complex_from<R: Rng>(
    rng: &mut R,
    model: &VarietyModel,
    max_terms: usize,
    pool: &[SheafDescriptor],
) -> FormalComplex {
    let terms = rng.gen_range(1..=max_terms);
    let mut degrees: Vec<i64> = (-3..=3).collect();
    degrees.shuffle(rng);
    let sheaves = degrees[..terms].iter().map(|&deg| {
        let desc = pool.choose(rng).unwrap().clone();
        let m = rng.gen_range(1..=2);
        (deg, desc.times(m))
    });
    FormalComplex::from_sheaves(*model, sheaves).unwrap()
}

/// Glues the top two degrees half of the time, when the Ext degree fits.
pub fn maybe_glue<R: Rng>(rng: &mut R, c: FormalComplex) -> FormalComplex {
    let degs: Vec<i64> = c.sheaves().map(|(d, _)| d).collect();
    if degs.len() < 2 || !rng.gen_bool(0.5) {
        return c;
    }
    let (to, from) = (degs[degs.len() - 2], degs[degs.len() - 1]);
    if from - to + 1 > c.model().dim() as i64 {
        return c;
    }
    let sheaves = c.sheaves().map(|(d, s)| (d, s.clone())).collect();
    FormalComplex::new(*c.model(), sheaves, vec![Glue { from, to, nonzero: true }]).unwrap()
}

/// Sums of shifted structure sheaves: `⊕ 𝒪^{m_i}[−i]`.
pub fn structure_sum(model: VarietyModel, mults: &[(i64, u32)]) -> FormalComplex {
    FormalComplex::from_sheaves(
        model,
        mults.iter().filter(|(_, m)| *m > 0).map(|&(i, m)| (i, SheafDescriptor::structure().times(m))),
    )
    .unwrap()
}
