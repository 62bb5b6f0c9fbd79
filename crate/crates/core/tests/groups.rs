use grouphull::group::{build_symmetry_action, coxeter_group, AnyMatGroup, CoxeterName, SymmetryOptions};
use grouphull::linalg::Matrix;
use grouphull::scalar::{Rational, Sqrt5};
use num_bigint::BigUint;

fn trace_pair<F: grouphull::scalar::Scalar>(x: &Matrix<F>, a: &Matrix<F>) -> F {
    x.mul(a).trace()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).unwrap()
}

#[test]
fn f4_orders_and_stabilizer() {
    let AnyMatGroup::Rational(g) = coxeter_group(CoxeterName::F4).unwrap() else { panic!() };
    assert_eq!(g.order(), 1152);
    assert!(g.closed_under_transpose());
    let t = std::time::Instant::now();
    let sym = build_symmetry_action(&g, SymmetryOptions::default()).unwrap();
    eprintln!("f4 action {:?}", t.elapsed());
    assert_eq!(sym.order(), BigUint::from(2_654_208u64));
    let mut a = Matrix::zeros(4, 4);
    a.set(3, 0, q(1, 1));
    a.set(3, 3, q(-1, 1));
    let inc: Vec<u32> = (0..1152u32).filter(|&i| trace_pair(g.element(i), &a) == Rational::from(1)).collect();
    assert_eq!(inc.len(), 288);
    let t = std::time::Instant::now();
    assert_eq!(sym.stabilizer_order(&inc), BigUint::from(4608u32));
    eprintln!("f4 stab {:?}", t.elapsed());
    let t = std::time::Instant::now();
    let c = sym.canonical_image(&inc);
    eprintln!("f4 canon {:?} {:?}", t.elapsed(), &c[..5]);
}

#[test]
fn h4_orders_and_counterexample() {
    let AnyMatGroup::Sqrt5(g) = coxeter_group(CoxeterName::H4).unwrap() else { panic!() };
    assert_eq!(g.order(), 14400);
    let t = std::time::Instant::now();
    let sym = build_symmetry_action(&g, SymmetryOptions::default()).unwrap();
    eprintln!("h4 action {:?}", t.elapsed());
    assert_eq!(sym.order(), BigUint::from(207_360_000u64));
    let a = [[-6, -11, -7, 4], [0, -2, 3, 1], [0, -1, 4, 3], [0, 0, 0, 0]];
    let b = [[2, 5, 3, -2], [0, 0, -1, -1], [0, 1, -2, -1], [0, 0, 0, 0]];
    let m = Matrix::from_rows((0..4).map(|r| (0..4).map(|c| Sqrt5::new(q(a[r][c], 4), q(b[r][c], 4))).collect()).collect()).unwrap();
    let one = Sqrt5::from_ints(1, 0);
    assert!(g.elements().iter().all(|x| trace_pair(x, &m) <= one));
    let inc: Vec<u32> = (0..14400u32).filter(|&i| trace_pair(g.element(i), &m) == one).collect();
    assert_eq!(inc.len(), 120);
    let t = std::time::Instant::now();
    assert_eq!(sym.stabilizer_order(&inc), BigUint::from(120u32));
    eprintln!("h4 stab {:?}", t.elapsed());
}
