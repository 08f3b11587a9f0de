//! Cohomology tables against independent computations: monomial counts,
//! Gröbner normal forms and Hilbert polynomials.

use ulrich_core::cohomology::{
    bott_table, column, product_line_table, quadric_line_table, sheaf_table, SheafDescriptor, Twist,
};
use ulrich_core::chern::{euler_char, twist_class, ulrich_chern_solve};
use ulrich_core::rational::qi;
use ulrich_core::variety::VarietyModel;

/// Exponent vectors of length `vars` summing to `deg`.
fn monomials(vars: usize, deg: i64) -> Vec<Vec<i64>> {
    if deg < 0 {
        return Vec::new();
    }
    if vars == 1 {
        return vec![vec![deg]];
    }
    let mut out = Vec::new();
    for first in 0..=deg {
        for mut rest in monomials(vars - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `h⁰(Pⁿ, 𝒪(k))` by counting monomials, `hⁿ` by Serre duality.
fn pn_by_monomials(n: u32, k: i64) -> Vec<u64> {
    let vars = n as usize + 1;
    let mut col = vec![0; vars];
    col[0] = monomials(vars, k).len() as u64;
    col[n as usize] += monomials(vars, -k - n as i64 - 1).len() as u64;
    col
}

#[test]
fn bott_matches_monomial_count() {
    for n in 1..=5 {
        for k in -12..=8 {
            assert_eq!(bott_table(n, k), pn_by_monomials(n, k), "P^{n}, k = {k}");
        }
    }
}

/// For `Q = {x0² + q(x1..) = 0}` the standard monomials of degree `k` modulo
/// the leading term `x0²` span `H⁰(Q, 𝒪(k))`.
#[test]
fn quadric_sections_are_standard_monomials() {
    for n in 2..=5 {
        for k in 0..=6 {
            let standard = monomials(n as usize + 2, k).into_iter().filter(|m| m[0] < 2).count() as u64;
            assert_eq!(quadric_line_table(n, k)[0], standard, "Q^{n}, k = {k}");
        }
    }
}

#[test]
fn product_sections_are_bihomogeneous_monomials() {
    for (n1, n2) in [(1, 1), (1, 2), (2, 2)] {
        for a in 0..=4 {
            for b in 0..=4 {
                let count = (monomials(n1 as usize + 1, a).len() * monomials(n2 as usize + 1, b).len()) as u64;
                assert_eq!(product_line_table(n1, n2, a, b)[0], count);
            }
        }
    }
}

/// Ulrich sheaves have Hilbert polynomial `deg·rk·C(t+n, n)`.
#[test]
fn ulrich_hilbert_polynomials() {
    let binom = |t: i64, n: i64| -> i64 { (1..=n).map(|j| t + j).product::<i64>() / (1..=n).product::<i64>() };
    let cases = [
        (VarietyModel::quadric(3).unwrap(), SheafDescriptor::spinor(None)),
        (VarietyModel::product(1, 1).unwrap(), SheafDescriptor::line2(1, 0)),
        (VarietyModel::proj(4).unwrap(), SheafDescriptor::structure()),
        (VarietyModel::elliptic(6).unwrap(), SheafDescriptor::ss(2, 12, Some(false))),
    ];
    for (model, desc) in cases {
        let n = model.dim() as i64;
        let unit = (model.deg() * desc.rank(&model) as u64) as i64;
        let table = sheaf_table(&desc, &model, (-10, 6)).unwrap();
        for t in -10..=6 {
            assert_eq!(table.euler(t), unit * binom(t, n), "{desc} on {model} at {t}");
        }
    }
}

#[test]
fn spinor_sections_follow_the_tautological_sequence() {
    let q3 = VarietyModel::quadric(3).unwrap();
    let s = SheafDescriptor::spinor(None);
    let h0 = |t: i64| column(&s, &q3, Twist::Diag(t)).unwrap()[0];
    assert_eq!((h0(0), h0(1)), (4, 16));
    for t in 0..6 {
        // 0 → S(t−1) → 𝒪(t)^4 → S(t) → 0 on global sections.
        assert_eq!(h0(t) + h0(t - 1), 4 * quadric_line_table(3, t)[0]);
    }
}

/// `χ(E(t))` of the solved Ulrich class is `(rd/2)(t+1)(t+2)`.
#[test]
fn ulrich_class_euler_polynomial() {
    for (d, i, chi) in [(4, 0, 2), (1, -3, 1), (7, 2, -1), (3, -4, 0)] {
        let model = VarietyModel::surface(d, i, chi).unwrap();
        for r in 1..=4 {
            let c = ulrich_chern_solve(&model, r).unwrap();
            for t in -5..=5 {
                let expected = qi(r * d * (t + 1) * (t + 2)) / qi(2);
                assert_eq!(euler_char(&twist_class(&c, t), &model).unwrap(), expected);
            }
        }
    }
}
