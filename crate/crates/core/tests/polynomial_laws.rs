use joints_core::field::{FieldElement, FieldSpec};
use joints_core::generators::random_polynomial;
use joints_core::polynomial::MultivariatePolynomial;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![0u64, 2, 3, 5, 7]).prop_map(|c| FieldSpec::new(c).unwrap())
}

fn element(spec: FieldSpec, rng: &mut ChaCha8Rng) -> FieldElement {
    match spec.order() {
        Some(p) => spec.from_u64(rng.gen_range(0..p)),
        None => spec
            .ratio(rng.gen_range(-20..=20), rng.gen_range(1..=6))
            .unwrap(),
    }
}

/// Calculus partial computed from `f(x + z)` by brute expansion: substitute
/// `x_i -> x_i + z` with a fresh variable `z` and read off the `z^1` part.
fn partial_by_shift(f: &MultivariatePolynomial, i: usize) -> MultivariatePolynomial {
    let spec = f.spec();
    let n = f.nvars();
    let mut out = MultivariatePolynomial::zero(spec, n);
    for (e, c) in f.terms() {
        // (x_i + z)^a = sum_k C(a,k) x_i^(a-k) z^k; the z^1 coefficient is a x_i^(a-1)
        let a = e[i] as u64;
        if a == 0 {
            continue;
        }
        let mut single = spec.zero();
        for _ in 0..a {
            single = &single + c;
        }
        let mut e2 = e.clone();
        e2[i] -= 1;
        out = out.add(&MultivariatePolynomial::from_terms(spec, n, [(e2, single)]).unwrap());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hasse_partial_is_shift_coefficient(spec in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_polynomial(spec, 3, 6, 8, &mut rng);
        for i in 0..3 {
            prop_assert_eq!(f.hasse_partial(i).unwrap(), partial_by_shift(&f, i));
        }
    }

    #[test]
    fn hasse_partial_is_linear(spec in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_polynomial(spec, 3, 5, 6, &mut rng);
        let g = random_polynomial(spec, 3, 5, 6, &mut rng);
        let a = element(spec, &mut rng);
        let lhs = f.scale(&a).add(&g).hasse_partial(1).unwrap();
        let rhs = f.hasse_partial(1).unwrap().scale(&a).add(&g.hasse_partial(1).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule(spec in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_polynomial(spec, 3, 4, 5, &mut rng);
        let g = random_polynomial(spec, 3, 4, 5, &mut rng);
        for i in 0..3 {
            let lhs = f.mul(&g).hasse_partial(i).unwrap();
            let rhs = f.hasse_partial(i).unwrap().mul(&g).add(&f.mul(&g.hasse_partial(i).unwrap()));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn derivative_along_line_is_directional_gradient(spec in field(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_polynomial(spec, 3, 6, 6, &mut rng);
        let v: Vec<_> = (0..3).map(|_| element(spec, &mut rng)).collect();
        let b: Vec<_> = (0..3).map(|_| element(spec, &mut rng)).collect();
        let t = element(spec, &mut rng);
        let lhs = f.restrict(&v, &b).unwrap().derivative().evaluate(&t);
        let x: Vec<_> = v.iter().zip(&b).map(|(vi, bi)| vi + &(&t * bi)).collect();
        let rhs = f
            .gradient()
            .iter()
            .zip(&b)
            .fold(spec.zero(), |acc, (g, bi)| &acc + &(bi * &g.evaluate(&x).unwrap()));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gradient_vanishes_iff_exponents_divisible(spec in field(), seed in any::<u64>(), lift in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = spec.characteristic();
        let mut f = random_polynomial(spec, 3, 5, 4, &mut rng);
        if lift {
            // force every exponent to a multiple of the characteristic
            let k = p.max(1) as u32;
            let terms: Vec<_> = f
                .terms()
                .map(|(e, c)| (e.iter().map(|a| if p == 0 { 0 } else { a * k }).collect(), c.clone()))
                .collect();
            f = MultivariatePolynomial::from_terms(spec, 3, terms).unwrap();
        }
        let grad_zero = f.gradient().iter().all(MultivariatePolynomial::is_zero);
        prop_assert_eq!(grad_zero, f.exponents_divisible_by_char());
        if p == 0 {
            prop_assert_eq!(grad_zero, f.is_constant() || f.is_zero());
        }
    }

    #[test]
    fn pth_root_roundtrip(p in prop::sample::select(vec![2u64, 3, 5, 7]), seed in any::<u64>()) {
        let spec = FieldSpec::prime(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_polynomial(spec, 3, 4, 3, &mut rng);
        let f = g.pow(p);
        prop_assert!(f.exponents_divisible_by_char());
        let root = f.pth_root().unwrap();
        prop_assert_eq!(&root, &g);
        prop_assert_eq!(root.pow(p), f);
    }
}

#[test]
fn pth_root_refuses_bad_input() {
    let f5 = FieldSpec::prime(5).unwrap();
    let x = MultivariatePolynomial::var(f5, 3, 0).unwrap();
    assert!(x.pow(4).pth_root().is_err());
    let q = FieldSpec::rationals();
    assert!(MultivariatePolynomial::var(q, 3, 0)
        .unwrap()
        .pth_root()
        .is_err());
}
