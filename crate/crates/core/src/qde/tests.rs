use std::collections::BTreeSet;

use super::*;
use crate::expr::parse;
use crate::tower::Tower;

fn set(ps: &[&str]) -> BTreeSet<String> {
    ps.iter().map(|s| s.to_string()).collect()
}

fn qde_of(f: &str, ps: &[&str]) -> Qde {
    find_qde(&parse(f, &set(ps)).unwrap(), DEFAULT_MAX_INDEX).unwrap()
}

fn expect(f: &str, ps: &[&str], printed: &str) {
    let got = qde_of(f, ps);
    let want = Qde::parse(printed, &set(ps)).unwrap();
    assert!(got.proportional(&want), "{}: got {}", f, got);
    assert!(verify_qde(&parse(f, &set(ps)).unwrap(), &got).unwrap());
}

#[test]
fn nu_examples() {
    assert_eq!(nu(1), (1, 1));
    assert_eq!(nu(3), (2, 2));
    assert_eq!(nu(7), (4, 1));
    assert_eq!(nu(14), (5, 4));
}

#[test]
fn nu_is_a_row_major_bijection() {
    let mut expected = Vec::new();
    for i in 1.. {
        for j in 1..=i {
            expected.push((i, j));
        }
        if expected.len() >= 500 {
            break;
        }
    }
    for k in 1..=500 {
        assert_eq!(nu(k), expected[k - 1]);
        let (i, j) = nu(k);
        assert_eq!(nu_inverse(i, j), k);
    }
}

#[test]
fn monomials_by_index() {
    assert_eq!(DiffMonomial::from_index(1), None);
    assert_eq!(DiffMonomial::from_index(2), Some(DiffMonomial::Linear(0)));
    assert_eq!(DiffMonomial::from_index(5), Some(DiffMonomial::Quadratic(0, 1)));
    assert_eq!(DiffMonomial::from_index(14), Some(DiffMonomial::Quadratic(2, 3)));
    for k in 2..200 {
        assert_eq!(DiffMonomial::from_index(k).unwrap().index(), k);
    }
}

#[test]
fn delta2_products() {
    let s = BTreeSet::new();
    let tan = parse("tan(z)", &s).unwrap();
    let mut t = Tower::new(&[], 16);
    let same = |t: &mut Tower, a: &Expr, b: &str| {
        let x = t.absorb(a).unwrap();
        let y = t.absorb(&parse(b, &s).unwrap()).unwrap();
        t.equal(&x, &y)
    };
    assert!(same(&mut t, &delta2(&tan, 3), "tan(z)^2"));
    assert!(same(&mut t, &delta2(&tan, 4), "1 + tan(z)^2"));
    assert!(same(&mut t, &delta2(&tan, 7), "2*tan(z)*(1+tan(z)^2)"));
    assert!(same(&mut t, &delta2(&tan, 1), "1"));
}

#[test]
fn text_round_trip() {
    let q = Qde::parse("(-1-z)*y + y^2 + z*(1+z)*y' = 0", &BTreeSet::new()).unwrap();
    assert_eq!(q.to_string(), "(-z - 1)*y + y^2 + (z^2 + z)*y' = 0");
    assert_eq!(Qde::parse(&q.to_string(), &BTreeSet::new()).unwrap(), q);
    let k = Qde::parse("-k^2*y^2 + (-k-1)*y'^2 + k*y*y''", &set(&["k"])).unwrap();
    assert_eq!(Qde::parse(&k.to_string(), &set(&["k"])).unwrap(), k);
    assert!(Qde::parse("y^3 = 0", &BTreeSet::new()).is_err());
    assert!(Qde::parse("y + 1 = 0", &BTreeSet::new()).is_err());
}

#[test]
fn normalization_fixes_sign_and_content() {
    let q = Qde::parse("4*y^2 - 6*z*y'", &BTreeSet::new()).unwrap();
    assert_eq!(q.to_string(), "-2*y^2 + 3*z*y' = 0");
}

#[test]
fn golden_equations() {
    expect("tan(z)", &[], "y'' - 2*y*y' = 0");
    expect("1/log(1+z)", &[], "(1+z)*y' + y^2 = 0");
    expect("sec(z)", &[], "-y^2 - 2*y'^2 + y''*y = 0");
    expect("z/log(1+z)", &[], "(-1-z)*y + y^2 + z*(1+z)*y' = 0");
    expect("sec(z)^k", &["k"], "-k^2*y^2 + (-k-1)*y'^2 + k*y''*y = 0");
}

#[test]
fn zero_and_holonomic_inputs() {
    let q = qde_of("sin(z)^2 + cos(z)^2 - 1", &[]);
    assert_eq!(q.to_string(), "y = 0");
    let e = qde_of("exp(z)", &[]);
    assert!(e.is_linear() || e.leading_index() <= 5);
    assert!(verify_qde(&parse("exp(z)", &BTreeSet::new()).unwrap(), &e).unwrap());
}

#[test]
fn verify_rejects_wrong_function() {
    let q = Qde::parse("y'' - 2*y*y' = 0", &BTreeSet::new()).unwrap();
    assert!(!verify_qde(&parse("sin(z)", &BTreeSet::new()).unwrap(), &q).unwrap());
}

#[test]
fn minimal_levels_fail_below() {
    let f = parse("tan(z)", &BTreeSet::new()).unwrap();
    for k in 3..7 {
        assert!(solve_level(&f, k).unwrap().is_none(), "index {}", k);
    }
    assert!(solve_level(&f, 7).unwrap().is_some());
}

#[test]
fn bound_errors() {
    let f = parse("tan(z)", &BTreeSet::new()).unwrap();
    assert_eq!(find_qde(&f, 2), Err(QdeError::Bound(2)));
    assert_eq!(find_qde(&f, 6), Err(QdeError::NotDetected(6)));
}
