//! Acceptance gate. Runs every criterion, prints one line per criterion and
//! exits non-zero if any of them fails.

mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ulrich_core::bridgeland::{
    central_charge, heart_gate, ulrich_charge_closed_form, ulrich_charge_expanded, Convention,
    HeartObstruction, HeartVerdict,
};
use ulrich_core::chern::{class_of, euler_char, twist_class, ulrich_chern_solve};
use ulrich_core::cohomology::{
    bott_table, column, sheaf_table, AbstractSheaf, SheafDescriptor, SpinorSign, Twist,
};
use ulrich_core::complexes::{
    external_product, hyper_table, pushforward_finite, triangle_2of3, FormalComplex, ProductSide,
    ThirdOutcome, TriangleRole, Trivialization,
};
use ulrich_core::generators::{elliptic_witness, generator_gate, GateVerdict};
use ulrich_core::rational::{q, qi, Rational};
use ulrich_core::ulrich::{
    is_ulrich_object, is_ulrich_sheaf, pn_decompose, pn_reconstruct, yoneda_build, Mode, YonedaWitness,
};
use ulrich_core::variety::VarietyModel;
use ulrich_core::Error;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_surface(rng: &mut ChaCha8Rng) -> (VarietyModel, i64, i64, i64) {
    let d = rng.gen_range(1..=10);
    let i = rng.gen_range(-4..=4);
    let chi = rng.gen_range(-3..=3);
    (VarietyModel::surface(d, i, chi).unwrap(), d, i, chi)
}

fn random_rational(rng: &mut ChaCha8Rng, positive: bool) -> Rational {
    let den = rng.gen_range(1..=12);
    let num = if positive { rng.gen_range(1..=60) } else { rng.gen_range(-60..=60) };
    q(num, den)
}

fn c1_chern_polynomial() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let (model, d, i, chi) = random_surface(&mut rng);
        let r = rng.gen_range(1..=6);
        let c = ulrich_chern_solve(&model, r).map_err(|e| e.to_string())?;
        let e1 = q(r * (i + 3), 2);
        let ch2 = qi(-r * chi) + q(r * d * (i * i + 3 * i + 4), 4);
        ensure(c.r == r && c.e1 == e1 && c.e2 == Some(&ch2 / qi(d)), || {
            format!("mismatch at r={r} d={d} i={i} chi={chi}: {c:?}")
        })?;
    }
    Ok("100/100 random surfaces".into())
}

fn c2_central_charge() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut re_ok, mut im_ok, mut expanded_ok) = (0, 0, 0);
    for _ in 0..200 {
        let (model, ..) = random_surface(&mut rng);
        let r = rng.gen_range(1..=6);
        let s = random_rational(&mut rng, false);
        let t = random_rational(&mut rng, true);
        let c = ulrich_chern_solve(&model, r).unwrap();
        let z = central_charge(&c, &s, &t, &model).unwrap();
        let closed = ulrich_charge_closed_form(r, &s, &t, &model).unwrap();
        re_ok += (z.re == closed.re) as u32;
        im_ok += (z.im == closed.im) as u32;
        expanded_ok += (z == ulrich_charge_expanded(r, &s, &t, &model).unwrap()) as u32;
    }
    let detail = format!(
        "re agrees {re_ok}/200, im agrees {im_ok}/200; definition-derived closed form agrees {expanded_ok}/200"
    );
    if re_ok == 200 && im_ok == 200 {
        Ok(detail)
    } else {
        Err(format!("{detail} (displayed closed form equals +∫exp((s+it)H)ch, the definition has −∫exp(−(s+it)H)ch)"))
    }
}

fn c3_projective_spaces() -> Outcome {
    let mut checked = 0;
    for n in 1..=5 {
        let p = VarietyModel::proj(n).unwrap();
        for shape in shift_shapes() {
            let e = common::structure_sum(p, &shape);
            let v = is_ulrich_object(&e, Mode::Both).map_err(|e| e.to_string())?;
            ensure(v.passed, || format!("P^{n}: {shape:?} rejected"))?;
            checked += 1;
        }
        let n_i = n as i64;
        for k in (-(n_i + 2)..=n_i + 2).filter(|k| *k != 0) {
            let v = is_ulrich_sheaf(&SheafDescriptor::line(k), &p).unwrap();
            ensure(!v.passed && v.witness().is_some(), || format!("P^{n}: O({k}) accepted"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} objects on P^1..P^5"))
}

fn shift_shapes() -> Vec<Vec<(i64, u32)>> {
    let mut out = Vec::new();
    for a in 0..=2u32 {
        for b in 0..=2u32 {
            for c in 0..=1u32 {
                if a + b + c > 0 {
                    out.push(vec![(-1, a), (0, b), (3, c)]);
                }
            }
        }
    }
    out
}

fn c4_quadrics_products() -> Outcome {
    let p11 = VarietyModel::product(1, 1).unwrap();
    for a in -3..=3 {
        for b in -3..=3 {
            let v = is_ulrich_sheaf(&SheafDescriptor::line2(a, b), &p11).unwrap();
            let expected = matches!((a, b), (1, 0) | (0, 1));
            ensure(v.passed == expected, || format!("O({a},{b}) verdict {}", v.passed))?;
            ensure(v.passed || v.witness().is_some(), || format!("O({a},{b}) failed without witness"))?;
        }
    }
    let q3 = VarietyModel::quadric(3).unwrap();
    let s = SheafDescriptor::spinor(None);
    let v = is_ulrich_sheaf(&s, &q3).unwrap();
    let h0 = column(&s, &q3, Twist::Diag(0)).unwrap()[0];
    ensure(v.passed && h0 == 4 && h0 == q3.deg() * s.rank(&q3) as u64, || {
        format!("Q3 spinor: passed={} h0={h0}", v.passed)
    })?;
    Ok("49 bidegrees on P1xP1, Q3 spinor h0 = 4".into())
}

fn p1_objects(max_size: u32) -> Vec<(Vec<(i64, u32)>, u32)> {
    let mut out = Vec::new();
    for a in 0..=max_size {
        for b in 0..=max_size - a {
            if a + b > 0 {
                out.push((vec![(0, a), (1, b)], a + b));
            }
        }
    }
    out
}

fn c5_kunneth_products() -> Outcome {
    let p1 = VarietyModel::proj(1).unwrap();
    let p11 = VarietyModel::product(1, 1).unwrap();
    let window = p11.default_window();
    let mut checked = 0;
    for (left, ls) in p1_objects(3) {
        for (right, rs) in p1_objects(3) {
            if ls + rs > 4 {
                continue;
            }
            let (e, f) = (common::structure_sum(p1, &left), common::structure_sum(p1, &right));
            for (side, bidegree) in [(ProductSide::TwistSecond, (0, 1)), (ProductSide::TwistFirst, (1, 0))] {
                let prod = external_product(&e, &f, side).map_err(|e| e.to_string())?;
                let mut expected: BTreeMap<i64, u32> = BTreeMap::new();
                for (p, m) in &left {
                    for (q, n) in &right {
                        if m * n > 0 {
                            *expected.entry(p + q).or_default() += m * n;
                        }
                    }
                }
                let spinors = FormalComplex::from_sheaves(
                    p11,
                    expected
                        .iter()
                        .map(|(d, m)| (*d, SheafDescriptor::line2(bidegree.0, bidegree.1).times(*m))),
                )
                .unwrap();
                let v = is_ulrich_object(&prod, Mode::Both).map_err(|e| e.to_string())?;
                ensure(v.passed, || format!("{left:?} x {right:?} not Ulrich"))?;
                ensure(
                    hyper_table(&prod, window).unwrap().table == hyper_table(&spinors, window).unwrap().table,
                    || format!("{left:?} x {right:?}: table differs from spinor sum"),
                )?;
                ensure(prod == spinors, || format!("{left:?} x {right:?}: sheaves differ"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} products on P1xP1"))
}

fn c6_mode_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let models = common::models();
    let mut passed = 0;
    let total = 600;
    for k in 0..total {
        let model = models[k % models.len()];
        let c = common::random_complex(&mut rng, &model, 3);
        let c = common::maybe_glue(&mut rng, c);
        match is_ulrich_object(&c, Mode::Both) {
            Ok(v) => passed += v.passed as u32,
            Err(Error::ModeDisagreement { direct, sheafwise }) => {
                return Err(format!("disagreement (direct {direct}, sheafwise {sheafwise}) on {c:?}"))
            }
            Err(e) => return Err(format!("{e} on {c:?}")),
        }
    }
    Ok(format!("{total} complexes over {} models, {passed} Ulrich, 0 disagreements", models.len()))
}

fn c7_two_of_three() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let models = [
        VarietyModel::proj(2).unwrap(),
        VarietyModel::quadric(2).unwrap(),
        VarietyModel::elliptic(4).unwrap(),
        VarietyModel::product(1, 1).unwrap(),
    ];
    let mut tally = [0; 3];
    for k in 0..100 {
        let model = models[k % models.len()];
        let pick = |rng: &mut ChaCha8Rng| {
            if rng.gen_bool(0.6) {
                common::random_ulrich_complex(rng, &model, 2)
            } else {
                common::random_complex(rng, &model, 2)
            }
        };
        let e = pick(&mut rng);
        let g = pick(&mut rng);
        let f = FormalComplex::direct_sum(&[e.clone(), g.clone()]).unwrap();
        let window = model.default_window();
        let table = |c: &FormalComplex| hyper_table(c, window).unwrap().table;
        let tables = [(TriangleRole::E, table(&e)), (TriangleRole::F, table(&f)), (TriangleRole::G, table(&g))];
        let skip = rng.gen_range(0..3);
        let known: Vec<_> = tables.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, x)| x).collect();
        let classes = [&e, &f, &g].map(|c| ulrich_core::chern::class_of_complex(c).unwrap());
        let verdict = triangle_2of3(
            [(known[0].0, &known[0].1), (known[1].0, &known[1].1)],
            &model,
            Some([&classes[0], &classes[1], &classes[2]]),
        )
        .map_err(|e| e.to_string())?;
        let third = &tables[skip].1;
        let direct = is_ulrich_object([&e, &f, &g][skip], Mode::Direct).unwrap().passed;
        match verdict.outcome {
            ThirdOutcome::CertifiedUlrich => {
                ensure(direct, || format!("certified Ulrich third is not Ulrich (case {k})"))?;
                tally[0] += 1;
            }
            ThirdOutcome::CertifiedNotUlrich { .. } => {
                ensure(!direct, || format!("certified non-Ulrich third is Ulrich (case {k})"))?;
                tally[1] += 1;
            }
            ThirdOutcome::NotDetermined { .. } => tally[2] += 1,
        }
        for (t, chi) in &verdict.predicted_euler {
            ensure(third.euler(*t) == *chi, || format!("predicted chi at {t} differs (case {k})"))?;
        }
        ensure(verdict.chi_additive == Some(true), || format!("chi additivity failed (case {k})"))?;
    }
    Ok(format!(
        "100 split triangles: {} certified Ulrich, {} certified not, {} undetermined; chi additive on all",
        tally[0], tally[1], tally[2]
    ))
}

fn c8_elliptic() -> Outcome {
    for d in 3..=10 {
        let model = VarietyModel::elliptic(d).unwrap();
        let (_, v) = elliptic_witness(&model).unwrap();
        ensure(v.passed, || format!("d={d}: witness rejected"))?;
        let o1 = FormalComplex::sheaf(model, SheafDescriptor::line(1), 0).unwrap();
        let g = generator_gate(&[o1], &model).unwrap();
        ensure(g == GateVerdict::DeficientRank { rank: 1, needed: 2 }, || format!("d={d}: {g:?}"))?;
    }
    Ok("d = 3..10".into())
}

fn c9_pushforward() -> Outcome {
    let mut fixtures = 0;
    for n in 1..=4 {
        let p = VarietyModel::proj(n).unwrap();
        let window = p.default_window();
        for shape in shift_shapes() {
            let e = common::structure_sum(p, &shape);
            let m = pn_decompose(&e).map_err(|e| e.to_string())?;
            let back = pn_reconstruct(p, &m).unwrap();
            ensure(
                hyper_table(&back, window).unwrap().table == hyper_table(&e, window).unwrap().table,
                || format!("P^{n} {shape:?}: reconstruction differs"),
            )?;
            fixtures += 1;
        }
    }
    let q2 = VarietyModel::quadric(2).unwrap();
    let e = FormalComplex::sheaf(q2, SheafDescriptor::line2(0, 1), 0).unwrap();
    let rep = pushforward_finite(&e, &VarietyModel::proj(2).unwrap(), q2.default_window()).unwrap();
    ensure(
        rep.result == Trivialization::Trivial { multiplicities: BTreeMap::from([(0, 2)]) },
        || format!("pushforward of O(0,1): {:?}", rep.result),
    )?;
    Ok(format!("{fixtures} reconstructions; pi_* O(0,1) = O_P2^2"))
}

fn c10_not_in_heart() -> Outcome {
    let mut count = 0;
    for (d, i, chi) in [(4, 0, 2), (1, -3, 1), (2, -2, 1), (5, 1, 3), (9, -1, 0)] {
        let model = VarietyModel::surface(d, i, chi).unwrap();
        for r1 in 1..=3 {
            for r2 in 1..=3 {
                let f = SheafDescriptor::Abstract(AbstractSheaf::ulrich_on_surface(&model, r1).unwrap());
                let g = SheafDescriptor::Abstract(AbstractSheaf::ulrich_on_surface(&model, r2).unwrap());
                let y = yoneda_build(&f, &g, 2, &model, YonedaWitness::Asserted).map_err(|e| e.to_string())?;
                for conv in [Convention::PaperLiteral, Convention::Normalized] {
                    for s in [q(-7, 2), qi(0), q(1, 3), qi(3)] {
                        let r = heart_gate(&y, &s, conv).unwrap();
                        ensure(
                            r.verdict == HeartVerdict::NotInHeart { reason: HeartObstruction::EqualSlope },
                            || format!("d={d} i={i} r=({r1},{r2}) s={s}: {:?}", r.verdict),
                        )?;
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{count} gate calls, all NotInHeart(equal_slope)"))
}

fn c11_oracle_hygiene() -> Outcome {
    let mut checked = 0;
    for model in common::models() {
        if model.dim() > 2 {
            continue;
        }
        let window = model.default_window();
        for desc in common::pool(&model) {
            let table = sheaf_table(&desc, &model, window).map_err(|e| e.to_string())?;
            let class = class_of(&desc, &model).map_err(|e| e.to_string())?;
            for t in window.0..=window.1 {
                let chi = euler_char(&twist_class(&class, t), &model).unwrap();
                ensure(chi == qi(table.euler(t)), || format!("{desc} on {model} at {t}: {chi} vs {}", table.euler(t)))?;
                checked += 1;
            }
        }
    }
    // Three-dimensional oracles: Ulrich Hilbert polynomial rk·deg·C(t+3, 3).
    let q3 = VarietyModel::quadric(3).unwrap();
    let s = SheafDescriptor::spinor(None);
    let table = sheaf_table(&s, &q3, (-12, 8)).unwrap();
    for t in -12..=8 {
        let hilb = 4 * (t + 1) * (t + 2) * (t + 3) / 6;
        ensure(table.euler(t) == hilb, || format!("Q3 spinor at {t}"))?;
        checked += 1;
    }
    for (sign, other) in [(SpinorSign::Plus, (1, 0)), (SpinorSign::Minus, (0, 1))] {
        let q2 = VarietyModel::quadric(2).unwrap();
        ensure(
            sheaf_table(&SheafDescriptor::spinor(Some(sign)), &q2, (-9, 4)).unwrap()
                == sheaf_table(&SheafDescriptor::line2(other.0, other.1), &q2, (-9, 4)).unwrap(),
            || format!("{sign:?} spinor table"),
        )?;
    }
    let mut serre = 0;
    for n in 1..=4u32 {
        for k in -10..=10i64 {
            let a = bott_table(n, k);
            let b = bott_table(n, -k - n as i64 - 1);
            for i in 0..=n as usize {
                ensure(a[i] == b[n as usize - i], || format!("Serre on P^{n}, k={k}, i={i}"))?;
                serre += 1;
            }
        }
    }
    Ok(format!("{checked} HRR evaluations, {serre} Serre pairs"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("1 Ulrich Chern polynomial", c1_chern_polynomial),
        ("2 Ulrich central charge closed form", c2_central_charge),
        ("3 projective-space examples", c3_projective_spaces),
        ("4 quadric and product examples", c4_quadrics_products),
        ("5 external products on P1xP1", c5_kunneth_products),
        ("6 direct vs sheafwise agreement", c6_mode_agreement),
        ("7 two-out-of-three on split triangles", c7_two_of_three),
        ("8 elliptic witness and K0 gate", c8_elliptic),
        ("9 pushforward and decomposition", c9_pushforward),
        ("10 Yoneda objects not in heart", c10_not_in_heart),
        ("11 oracle hygiene", c11_oracle_hygiene),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = std::time::Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  criterion {name}: {detail} ({secs:.2}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail} ({secs:.2}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
