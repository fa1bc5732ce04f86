use std::sync::LazyLock;

use charsum::apps::{
    cor42_transform, edwards_bruteforce, edwards_count, lennon_trace, EdwardsMode, EdwardsSpec,
    RootChoice, ShiftedCubicSpec,
};
use charsum::curves::{
    count_bruteforce, count_naive, count_theorem, decomposition, thm_coeffs, trace_frobenius,
    CountMode, CurveSpec,
};
use charsum::hyperf::{BinomSource, Series};
use charsum::sums::GaussTable;
use charsum::{Fe, FieldCtx, SumCtx};
use num_complex::Complex64;
use proptest::prelude::*;

const SHAPES: [(u32, u32); 12] = [
    (2, 1),
    (3, 1),
    (5, 1),
    (13, 1),
    (19, 1),
    (2, 3),
    (2, 4),
    (3, 2),
    (3, 3),
    (5, 2),
    (7, 2),
    (2, 5),
];

static FIELDS: LazyLock<Vec<SumCtx>> = LazyLock::new(|| {
    SHAPES
        .iter()
        .map(|&(p, n)| SumCtx::new(FieldCtx::new(p, n).unwrap()))
        .collect()
});

static PRIMES: LazyLock<Vec<SumCtx>> = LazyLock::new(|| {
    [13, 19, 37, 41, 61, 73]
        .iter()
        .map(|&p| SumCtx::new(FieldCtx::new(p, 1).unwrap()))
        .collect()
});

fn prime(q: u32) -> &'static SumCtx {
    PRIMES.iter().find(|c| c.q() == q).unwrap()
}

fn unit(f: &FieldCtx, k: u32) -> Fe {
    f.elem(1 + k % (f.q() - 1))
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() < tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dlog_is_a_homomorphism(which in 0..SHAPES.len(), i in any::<u32>(), j in any::<u32>()) {
        let f = FIELDS[which].field();
        let (x, y) = (unit(f, i), unit(f, j));
        let lhs = f.dlog(f.mul(x, y)).unwrap();
        let rhs = (f.dlog(x).unwrap() + f.dlog(y).unwrap()) % (f.q() - 1);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn trace_is_linear(which in 0..SHAPES.len(), i in any::<u32>(), j in any::<u32>(), c in any::<u32>()) {
        let f = FIELDS[which].field();
        let (x, y) = (f.elem(i % f.q()), f.elem(j % f.q()));
        let c = f.elem(c % f.p());
        let lhs = f.trace(f.add(f.mul(c, x), y));
        prop_assert_eq!(lhs, f.add(f.mul(c, f.trace(x)), f.trace(y)));
    }

    #[test]
    fn characters_multiply(which in 0..SHAPES.len(), m in any::<i64>(), i in any::<u32>(), j in any::<u32>()) {
        let f = FIELDS[which].field();
        let chi = f.character(m);
        let (x, y) = (unit(f, i), unit(f, j));
        prop_assert!(close(f.mul_char(chi, f.mul(x, y)), f.mul_char(chi, x) * f.mul_char(chi, y), 1e-9));
        prop_assert!(close(f.mul_char(chi.conj(), x), f.mul_char(chi, x).conj(), 1e-12));
    }

    #[test]
    fn additive_delta(which in 0..SHAPES.len(), i in any::<u32>(), j in any::<u32>()) {
        let f = FIELDS[which].field();
        let (x, y) = (f.elem(i % f.q()), f.elem(j % f.q()));
        let s: Complex64 = f.elements().map(|z| f.add_char(f.mul(z, f.sub(x, y)))).sum();
        let want = if x == y { f.q() as f64 } else { 0.0 };
        prop_assert!(close(s, want.into(), f.tol().single(f.q())));
    }

    #[test]
    fn gauss_sums_have_norm_q(which in 0..SHAPES.len(), m in 1i64..10_000) {
        let c = &FIELDS[which];
        let order = c.q() as i64 - 1;
        prop_assume!(m % order != 0);
        prop_assert!((c.g(m).norm_sqr() - c.qf()).abs() < c.field().tol().double(c.q()));
    }

    #[test]
    fn gauss_product_expansion(which in 0..SHAPES.len(), m in any::<i32>(), n in any::<i32>()) {
        let c = &FIELDS[which];
        let (m, n) = (m as i64, n as i64);
        prop_assume!((m - n).rem_euclid(c.q() as i64 - 1) != 0);
        let f = c.field();
        let lhs = c.g(m) * c.g(-n);
        let rhs = c.qf() * c.binom(f.character(m), f.character(n)) * c.g(m - n) * c.t_minus_one(n);
        prop_assert!(close(lhs, rhs, f.tol().double(c.q())));
    }

    #[test]
    fn binomial_symmetries(which in 0..SHAPES.len(), m in any::<i32>(), n in any::<i32>()) {
        let c = &FIELDS[which];
        let f = c.field();
        let (a, b) = (f.character(m as i64), f.character(n as i64));
        let minus_one = f.from_int(-1);
        let lhs = c.binom(a, b);
        let tol = f.tol().single(c.q());
        prop_assert!(close(lhs, c.binom(b * a.conj(), b) * f.mul_char(b, minus_one), tol));
        prop_assert!(close(lhs, c.binom(b.conj(), a.conj()) * f.mul_char(a * b, minus_one), tol));
        prop_assert!(close(lhs, c.binom_direct(a, b), tol));
    }

    #[test]
    fn theta_from_gauss_sums(which in 0..SHAPES.len(), i in any::<u32>()) {
        let c = &FIELDS[which];
        let f = c.field();
        let x = unit(f, i);
        let order = c.q() as i64 - 1;
        let s: Complex64 = (0..order).map(|m| c.g(-m) * c.t(m, x)).sum();
        prop_assert!(close(f.add_char(x), s / order as f64, f.tol().double(c.q())));
    }
}

#[test]
fn trace_is_onto_prime_field() {
    for c in FIELDS.iter() {
        let f = c.field();
        let mut seen = vec![false; f.p() as usize];
        for x in f.elements() {
            seen[f.trace(x).index() as usize] = true;
        }
        assert!(seen.iter().all(|&s| s), "q = {}", f.q());
    }
}

#[test]
fn rebuilds_are_identical() {
    for &(p, n) in &SHAPES {
        let (f, g) = (FieldCtx::new(p, n).unwrap(), FieldCtx::new(p, n).unwrap());
        assert_eq!(f.generator(), g.generator());
        assert_eq!(f.modulus(), g.modulus());
        let table = GaussTable::build(&f);
        assert_eq!(table, GaussTable::build(&g));
        assert_eq!(table, GaussTable::build(&f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn series_sources_agree(which in 0..SHAPES.len(), up in prop::collection::vec(any::<i16>(), 2..4), lo_seed in any::<i16>(), i in any::<u32>()) {
        let c = &FIELDS[which];
        let f = c.field();
        let upper: Vec<_> = up.iter().map(|&m| f.character(m as i64)).collect();
        let lower: Vec<_> = (0..upper.len() - 1).map(|k| f.character(lo_seed as i64 * (k as i64 + 1))).collect();
        let x = f.elem(i % f.q());
        let a = Series::prepare(c, &upper, &lower, BinomSource::Cached).unwrap();
        let b = Series::prepare(c, &upper, &lower, BinomSource::Convolution).unwrap();
        prop_assert!(close(a.eval(c, x), b.eval(c, x), f.tol().single(c.q())));
        let again = Series::prepare(c, &upper, &lower, BinomSource::Cached).unwrap();
        prop_assert_eq!(a.eval(c, x), again.eval(c, x));
    }

    #[test]
    fn theorem_count_equals_enumeration(case in 0usize..7, i in any::<u32>(), j in any::<u32>()) {
        let (q, e, d) = [(13, 2, 3), (37, 2, 3), (13, 2, 2), (37, 3, 4), (19, 3, 3), (41, 2, 5), (73, 4, 3)][case];
        let c = prime(q);
        let f = c.field();
        let spec = CurveSpec::new(e, d, unit(f, i), unit(f, j)).unwrap();
        prop_assert_eq!(count_theorem(c, &spec).unwrap(), count_bruteforce(f, &spec) as i64);
    }

    #[test]
    fn enumerations_agree(case in 0usize..4, e in 1u32..5, d in 2u32..6, i in any::<u32>(), j in any::<u32>()) {
        let c = &PRIMES[case];
        let f = c.field();
        let spec = CurveSpec::new(e, d, unit(f, i), unit(f, j)).unwrap();
        prop_assert_eq!(count_bruteforce(f, &spec), count_naive(f, &spec));
    }

    #[test]
    fn derivation_pieces(case in 0usize..3, i in any::<u32>(), j in any::<u32>()) {
        let (q, e, d) = [(13, 2, 3), (19, 3, 3), (13, 4, 2)][case];
        let c = prime(q);
        let f = c.field();
        let dec = decomposition(c, &CurveSpec::new(e, d, unit(f, i), unit(f, j)).unwrap()).unwrap();
        let tol = f.tol().double(c.q());
        prop_assert!(close(dec.a_direct, dec.a_closed, tol));
        prop_assert!(close(dec.b_direct, dec.b_closed, tol));
        prop_assert!(close(dec.d_direct, dec.d_from_count, tol));
        prop_assert!(close(dec.d_gauss, dec.d_from_count, tol));
    }

    #[test]
    fn lennon_agrees_with_traces(case in 0usize..3, i in any::<u32>(), j in any::<u32>()) {
        let c = prime([13, 37, 73][case]);
        let f = c.field();
        let spec = CurveSpec::new(2, 3, unit(f, i), unit(f, j)).unwrap();
        let t = lennon_trace(c, spec.a, spec.b).unwrap();
        prop_assert_eq!(t, trace_frobenius(c, &spec, CountMode::Bruteforce).unwrap());
        prop_assert_eq!(t, trace_frobenius(c, &spec, CountMode::Theorem).unwrap());
    }

    #[test]
    fn edwards_formula_matches(case in 0usize..3, i in any::<u32>(), j in any::<u32>()) {
        let c = prime([13, 19, 37][case]);
        let f = c.field();
        let (al, be) = (unit(f, i), unit(f, j));
        prop_assume!(al != be);
        let s = EdwardsSpec::new(al, be).unwrap();
        prop_assert_eq!(edwards_count(c, &s, EdwardsMode::Formula).unwrap(), edwards_bruteforce(f, &s) as i64);
    }

    #[test]
    fn cor42_holds_per_branch(case in 0usize..2, i in any::<u32>(), j in any::<u32>()) {
        let c = prime([13, 37][case]);
        let f = c.field();
        let a = unit(f, i);
        let r = unit(f, j);
        let b = f.mul(r, r);
        let two_r = f.add(r, r);
        prop_assume!(f.sub(a, two_r) != Fe::ZERO && f.add(a, two_r) != Fe::ZERO);
        prop_assume!(ShiftedCubicSpec::new(f, a, b).is_ok());
        for root in [RootChoice::Canonical, RootChoice::Other] {
            let rep = cor42_transform(c, a, b, root).unwrap();
            prop_assert!(rep.matched, "{:?}", rep);
        }
    }
}

#[test]
fn dual_forms_agree() {
    for &(q, e, d) in &[(13, 2, 3), (37, 2, 3), (13, 2, 2), (37, 3, 4), (73, 3, 4), (19, 3, 3), (37, 3, 3), (41, 2, 5)] {
        let c = prime(q);
        let f = c.field();
        let co = thm_coeffs(c, &CurveSpec::new(e, d, Fe::ONE, Fe::ONE).unwrap()).unwrap();
        assert!(co.max_discrepancy() < f.tol().double(c.q()) * c.qf(), "{q} {e} {d}");
    }
}
