use std::collections::BTreeSet;

use super::*;
use crate::expr::{differentiate, parse};

fn p(s: &str) -> Expr {
    parse(s, &BTreeSet::new()).unwrap()
}

fn build(s: &str) -> (Tower, CanonicalForm) {
    let mut t = Tower::new(&[], DEFAULT_DEPTH_LIMIT);
    let f = t.absorb(&p(s)).unwrap();
    (t, f)
}

fn kinds(t: &Tower) -> Vec<KernelKind> {
    t.kernels().iter().map(|k| k.kind.clone()).collect()
}

#[test]
fn tan_uses_a_trig_pair() {
    let (t, _) = build("tan(z)");
    assert_eq!(kinds(&t), vec![KernelKind::Cos, KernelKind::Sin]);
}

#[test]
fn log_kernel_derivative() {
    let (t, f) = build("1/log(1+z)");
    assert_eq!(kinds(&t), vec![KernelKind::Log]);
    let expected = t.canonicalize(&p("1/(1+z)")).unwrap();
    assert!(t.equal(&t.kernels()[0].deriv, &expected));
    let df = t.deriv(&f);
    let printed = t.canonicalize(&p("-1/((1+z)*log(1+z)^2)")).unwrap();
    assert!(t.equal(&df, &printed));
}

#[test]
fn arcsinh_tower_contains_radical() {
    let (t, _) = build("arcsinh(sin(z)/(1+cos(z)))");
    assert_eq!(
        kinds(&t),
        vec![KernelKind::Cos, KernelKind::Sin, KernelKind::Sqrt, KernelKind::Arcsinh]
    );
    // The radicand 1 + sin²/(1+cos)² collapses to 2/(1+cos).
    let radicand = t.canonicalize(&p("2/(1+cos(z))")).unwrap();
    assert!(t.equal(&t.kernels()[2].arg, &radicand));
}

#[test]
fn one_plus_tan_squared_is_sec_squared() {
    let (t, f) = build("1 + tan(z)^2");
    let sec2 = t.canonicalize(&p("1/cos(z)^2")).unwrap();
    assert_eq!(f, sec2);
    assert!(f.numerator().is_one());
}

#[test]
fn sec_tan_product() {
    let (t, f) = build("sec(z)*tan(z)");
    let g = t.canonicalize(&p("sin(z)/cos(z)^2")).unwrap();
    assert_eq!(f, g);
}

#[test]
fn zero_canonicalizes_to_zero() {
    let (_, f) = build("0");
    assert!(f.is_zero());
    let (_, g) = build("sin(z)^2 + cos(z)^2 - 1");
    assert!(g.is_zero());
    let (_, h) = build("cosh(z)^2 - sinh(z)^2 - 1");
    assert!(h.is_zero());
    let (_, r) = build("sqrt(1+z)^2 - z - 1");
    assert!(r.is_zero());
}

#[test]
fn log_ansatz_rows() {
    let params = vec!["C0".to_string(), "C1".to_string()];
    let set: BTreeSet<String> = params.iter().cloned().collect();
    let e = parse("C0*(1+z)*log(1+z) + C1*(1+z) - 1", &set).unwrap();
    let mut t = Tower::new(&params, DEFAULT_DEPTH_LIMIT);
    let f = t.absorb(&e).unwrap();
    let rows = t.collect_kernel_coefficients(&f);
    assert_eq!(rows.len(), 2);
    let (c0, c1, z) = (MPoly::var(1), MPoly::var(2), MPoly::var(0));
    let one = MPoly::one();
    assert_eq!(rows[0].1, &(&c1 * &(&z + &one)) - &one);
    assert_eq!(rows[1].1, &c0 * &(&z + &one));
}

#[test]
fn tan_ansatz_has_five_rows() {
    let names: Vec<String> = (0..5).map(|i| format!("C{}", i)).collect();
    let set: BTreeSet<String> = names.iter().cloned().collect();
    let e = parse(
        "2*tan(z)*(1+tan(z)^2) + C4*(1+tan(z)^2)^2 + C3*(tan(z)+tan(z)^3) \
         + C2*(1+tan(z)^2) + C1*tan(z)^2 + C0*tan(z)",
        &set,
    )
    .unwrap();
    let mut t = Tower::new(&names, DEFAULT_DEPTH_LIMIT);
    let f = t.absorb(&e).unwrap();
    assert_eq!(t.collect_kernel_coefficients(&f).len(), 5);
}

#[test]
fn constant_form_has_single_row() {
    let (t, f) = build("7/3");
    let rows = t.collect_kernel_coefficients(&f);
    assert_eq!(rows.len(), 1);
    assert!(rows[0].0.is_one());
}

#[test]
fn frozen_tower_rejects_new_kernels() {
    let (t, _) = build("sin(z)");
    assert!(t.canonicalize(&p("cos(z)^3")).is_ok());
    assert!(matches!(t.canonicalize(&p("exp(z)")), Err(TowerError::Ungenerated(_))));
}

#[test]
fn depth_limit_is_enforced() {
    let mut t = Tower::new(&[], 2);
    assert!(matches!(t.absorb(&p("exp(exp(exp(z)))")), Err(TowerError::DepthExceeded(2))));
}

#[test]
fn reduction_is_idempotent() {
    let (t, f) = build("(sin(z) + cos(z))^5 * sqrt(1+sin(z))^3");
    let (again, extra) = t.reduce_poly(f.numerator().clone());
    assert!(extra.is_one());
    assert_eq!(&again, f.numerator());
}

#[test]
fn derivative_commutes_with_canonicalization() {
    for s in [
        "tan(z)",
        "sec(z/2)^3",
        "log(1+sin(z))",
        "arcsin(z/(1+z))",
        "arctanh(sin(2*z)/(1+cos(2*z)))",
        "exp(z*sinh(z))/(1+z)",
        "sqrt(1+z^2)*cot(z+1)",
    ] {
        let e = p(s);
        let mut t = Tower::new(&[], DEFAULT_DEPTH_LIMIT);
        let f = t.absorb(&e).unwrap();
        let d1 = t.absorb(&differentiate(&e, 1)).unwrap();
        assert!(t.equal(&d1, &t.deriv(&f)), "{}", s);
        let d2 = t.absorb(&differentiate(&e, 2)).unwrap();
        assert!(t.equal(&d2, &t.deriv_n(&f, 2)), "{}", s);
    }
}

#[test]
fn parameter_power_kernel() {
    let params = vec!["k".to_string()];
    let set: BTreeSet<String> = params.iter().cloned().collect();
    let mut t = Tower::new(&params, DEFAULT_DEPTH_LIMIT);
    let f = t.absorb(&parse("sec(z)^k", &set).unwrap()).unwrap();
    let expected = t.absorb(&parse("k*tan(z)*sec(z)^k", &set).unwrap()).unwrap();
    assert!(t.equal(&t.deriv(&f), &expected));
}
