//! Affine point counts of E_{e,d}: y^e = x^d + ax + b, by enumeration and
//! by the closed forms in Gauss sums and hypergeometric series.
//!
//! Notation shared by the evaluators, for q ≡ 1 (mod ed(d-1)):
//! s = (q-1)/e, ψ = (q-1)/(e(d-1)), u = (q-1)/(ed(d-1)), c = (q-1)/d and
//! α = (d/a)·(bd/(a(d-1)))^{d-1}.

use num_complex::Complex64;
use thiserror::Error;

use crate::chars::{exact_div, CharError, CharIdx};
use crate::field::{Fe, FieldCtx, FieldError};
use crate::hyperf::{HfError, Series};
use crate::kahan::ksum;
use crate::sums::SumCtx;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("coefficients a and b must be nonzero")]
    ZeroCoefficient,
    #[error("need e >= 1 and d >= 2, got e = {e}, d = {d}")]
    BadExponents { e: u32, d: u32 },
    #[error("q = {q} is not 1 modulo {modulus}")]
    Congruence { q: u32, modulus: u64 },
    #[error("d = {0} has the wrong parity for this evaluator")]
    Parity(u32),
    #[error("formula value {re}{im:+}i is not within the rounding guard of an integer")]
    Rounding { re: f64, im: f64 },
    #[error("Hasse bound violated: a_q = {trace}, q = {q}")]
    Hasse { trace: i64, q: u32 },
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Hf(#[from] HfError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Largest admissible distance from the nearest integer.
pub const ROUNDING_GUARD: f64 = 0.01;

/// The curve y^e = x^d + ax + b over the field of the accompanying context.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveSpec {
    pub e: u32,
    pub d: u32,
    pub a: Fe,
    pub b: Fe,
}

impl CurveSpec {
    pub fn new(e: u32, d: u32, a: Fe, b: Fe) -> Result<Self, CurveError> {
        if e == 0 || d < 2 {
            return Err(CurveError::BadExponents { e, d });
        }
        if a.is_zero() || b.is_zero() {
            return Err(CurveError::ZeroCoefficient);
        }
        Ok(Self { e, d, a, b })
    }

    pub fn alpha(&self, f: &FieldCtx) -> Fe {
        let d = f.from_int(self.d as i64);
        let d1 = f.from_int(self.d as i64 - 1);
        let ratio = f.div(f.mul(self.b, d), f.mul(self.a, d1)).expect("a(d-1) is a unit");
        let pow = f.pow(ratio, self.d as i64 - 1).expect("nonnegative power");
        f.mul(f.div(d, self.a).expect("a is nonzero"), pow)
    }

    fn rhs(&self, f: &FieldCtx, x: Fe) -> Fe {
        let xd = f.pow(x, self.d as i64).expect("nonnegative power");
        f.add(f.add(xd, f.mul(self.a, x)), self.b)
    }
}

/// `table[v] = #{y : y^k = v}`, indexed by canonical element index.
pub fn power_counts(f: &FieldCtx, k: u32) -> Vec<u32> {
    let mut table = vec![0u32; f.q() as usize];
    for y in f.elements() {
        let v = f.pow(y, k as i64).expect("nonnegative power");
        table[v.index() as usize] += 1;
    }
    table
}

/// #{(x, y) ∈ F_q² : y^e = x^d + ax + b}.
pub fn count_bruteforce(f: &FieldCtx, spec: &CurveSpec) -> u64 {
    let table = power_counts(f, spec.e);
    f.elements()
        .map(|x| table[spec.rhs(f, x).index() as usize] as u64)
        .sum()
}

/// The same count by enumerating all q² pairs.
pub fn count_naive(f: &FieldCtx, spec: &CurveSpec) -> u64 {
    let mut n = 0;
    for x in f.elements() {
        let r = spec.rhs(f, x);
        for y in f.elements() {
            if f.pow(y, spec.e as i64).expect("nonnegative power") == r {
                n += 1;
            }
        }
    }
    n
}

/// Nearest integer to `v`, provided |Im v| < `tol` and the real part is
/// within [`ROUNDING_GUARD`] of it.
pub fn round_guarded(v: Complex64, tol: f64) -> Result<i64, CurveError> {
    let r = v.re.round();
    if v.im.abs() >= tol || (v.re - r).abs() >= ROUNDING_GUARD || !r.is_finite() {
        return Err(CurveError::Rounding { re: v.re, im: v.im });
    }
    Ok(r as i64)
}

#[derive(Debug, Clone, Copy)]
struct Steps {
    s: i64,
    psi: i64,
    u: i64,
    c: i64,
    half: i64,
}

fn steps(ctx: &SumCtx, e: u32, d: u32) -> Result<Steps, CurveError> {
    if e == 0 || d < 2 {
        return Err(CurveError::BadExponents { e, d });
    }
    let q = ctx.q();
    let modulus = e as u64 * d as u64 * (d as u64 - 1);
    if (q as u64 - 1) % modulus != 0 {
        return Err(CurveError::Congruence { q, modulus });
    }
    let q1 = q as i64 - 1;
    let (e, d) = (e as i64, d as i64);
    Ok(Steps {
        s: q1 / e,
        psi: q1 / (e * (d - 1)),
        u: q1 / (e * d * (d - 1)),
        c: q1 / d,
        half: q1 / 2,
    })
}

/// The index k with id = ke, skipping `skip`, if any.
fn degenerate_index(i: i64, e: i64, d: i64, skip: Option<i64>) -> Option<i64> {
    (1..d).find(|&k| Some(k) != skip && i * d == k * e)
}

#[derive(Debug, Clone)]
struct Term {
    i: i64,
    series: Series,
    coef: Complex64,
    n_coef: Complex64,
    /// Character exponent and coefficient of the degenerate-brace correction.
    correction: Option<(i64, Complex64)>,
}

/// Everything in a theorem count that does not depend on (a, b).
#[derive(Debug, Clone)]
pub struct TheoremPlan<'a> {
    ctx: &'a SumCtx,
    e: u32,
    d: u32,
    st: Steps,
    terms: Vec<Term>,
}

impl<'a> TheoremPlan<'a> {
    pub fn new(ctx: &'a SumCtx, e: u32, d: u32) -> Result<Self, CurveError> {
        let st = steps(ctx, e, d)?;
        let mut plan = Self {
            ctx,
            e,
            d,
            st,
            terms: Vec::new(),
        };
        if e > 1 {
            plan.terms = if d % 2 == 0 {
                plan.even_terms()?
            } else {
                plan.odd_terms()?
            };
        }
        Ok(plan)
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    fn even_terms(&self) -> Result<Vec<Term>, CurveError> {
        let ctx = self.ctx;
        let Steps { s, psi, c, half, .. } = self.st;
        let (e, d) = (self.e as i64, self.d as i64);
        let q = ctx.qf();
        let q1 = q - 1.0;
        let mid = d / 2;
        let de2 = d * e / 2;
        let sg = ctx.t_minus_one_frac((d - 2) * (2 * d - 1) * (ctx.q() as i64 - 1), 8 * (d - 1))?;
        let g_phi = ctx.g(half);
        let mut terms = Vec::new();
        for i in 1..e {
            let deg = degenerate_index(i, e, d, Some(mid));
            let m = m_product_even(ctx, self.st, e, d, i);
            let mut upper = vec![half, 0];
            let mut lower = vec![(de2 - i) * psi];
            for j in (1..d).filter(|&j| j != mid) {
                upper.push(j * c);
                lower.push((j * e - i) * psi);
            }
            let series = Series::prepare_idx(ctx, &upper, &lower)?;
            let scale = if deg.is_some() { q } else { 1.0 };
            let correction = deg.map(|k| {
                let ms = -k * c;
                let mut r = ctx.g(ms + half) * ctx.g(-ms) * ctx.g(ms) * ctx.g(-ms - (de2 - i) * psi);
                for j in (1..d).filter(|&j| j != mid && j != k) {
                    r *= ctx.g(ms + j * c) * ctx.g(-ms - (j * e - i) * psi);
                }
                let coef = ctx.g(-i * s) * ctx.t_minus_one(i * s) * q1 * r
                    / (q.powi(d as i32 - 1) * g_phi * sg);
                (ms, coef)
            });
            terms.push(Term {
                i,
                series,
                coef: sg * m * scale,
                n_coef: Complex64::new(0.0, 0.0),
                correction,
            });
        }
        Ok(terms)
    }

    fn odd_terms(&self) -> Result<Vec<Term>, CurveError> {
        let ctx = self.ctx;
        let Steps { s, psi, u, c, half } = self.st;
        let (e, d) = (self.e as i64, self.d as i64);
        let q = ctx.qf();
        let q1i = ctx.q() as i64 - 1;
        let s1 = ctx.t_minus_one_frac((3 * d - 1) * q1i, 8 * d)?;
        let s2 = ctx.t_minus_one_frac((4 * d * d + 3 * d - 1) * q1i, 8 * d)?;
        let g_phi = ctx.g(half);
        let mut terms = Vec::new();
        for i in 1..e {
            let deg = degenerate_index(i, e, d, None);
            let (m, n) = (m_product_odd(ctx, self.st, e, d, i), n_product_odd(ctx, self.st, e, d, i));
            let upper: Vec<i64> = (1..d).map(|j| ((j - 1) * e * d + i * d - j * e) * u).collect();
            let lower: Vec<i64> = (2..d).map(|j| (j - 1) * e * psi).collect();
            let series = Series::prepare_idx(ctx, &upper, &lower)?;
            let lead = ctx.g(-i * s) / g_phi;
            let scale = if deg.is_some() { q } else { 1.0 };
            let correction = deg.map(|k| {
                let ms = -k * c;
                let mut r = Complex64::new(1.0, 0.0);
                for j in (1..d).filter(|&j| j != k) {
                    r *= ctx.g(ms + j * c) * ctx.g(-ms - (j * e - i) * psi);
                }
                let coef = s1 * lead * ctx.t_minus_one(i * s) * (q - 1.0) * r / q.powi(d as i32 - 2);
                (ms, coef)
            });
            terms.push(Term {
                i,
                series,
                coef: s2 * lead * m * scale,
                n_coef: s1 * lead * ctx.t_minus_one(i * s) * n / q.powi(d as i32 - 1),
                correction,
            });
        }
        Ok(terms)
    }

    /// Unrounded theorem value of N_{e,d} for coefficients (a, b).
    pub fn value(&self, a: Fe, b: Fe) -> Result<Complex64, CurveError> {
        let spec = CurveSpec::new(self.e, self.d, a, b)?;
        let ctx = self.ctx;
        let f = ctx.field();
        let Steps { s, psi, .. } = self.st;
        let e = self.e as i64;
        let alpha = spec.alpha(f);
        let mut total = vec![Complex64::new(ctx.qf(), 0.0)];
        for i in 1..e {
            total.push(ctx.t(-i * s, b));
        }
        let d1 = f.from_int(self.d as i64 - 1);
        if self.d % 2 == 0 {
            let d1_over_b = f.div(d1, b)?;
            for t in &self.terms {
                let i = t.i;
                total.push(t.coef * ctx.t(i * s, d1_over_b) * t.series.eval(ctx, alpha));
                if let Some((ms, coef)) = t.correction {
                    let tb = ctx.t((e - i) * s, b) / ctx.t((e - i) * s, d1);
                    total.push(coef * tb * ctx.t(ms, alpha));
                }
            }
        } else {
            let bd = f.div(b, d1)?;
            let neg_alpha = f.neg(alpha);
            let neg_inv_alpha = f.neg(f.inv(alpha)?);
            for t in &self.terms {
                let i = t.i;
                total.push(-t.n_coef * ctx.t((e - i) * s, bd));
                total.push(
                    t.coef
                        * ctx.t(-i * s, bd)
                        * ctx.t((e - i) * psi, neg_inv_alpha)
                        * t.series.eval(ctx, neg_alpha),
                );
                if let Some((ms, coef)) = t.correction {
                    total.push(coef * ctx.t((e - i) * s, bd) * ctx.t(ms, neg_alpha));
                }
            }
        }
        Ok(ksum(total))
    }

    /// Rounded theorem count.
    pub fn count(&self, a: Fe, b: Fe) -> Result<i64, CurveError> {
        let v = self.value(a, b)?;
        round_guarded(v, self.ctx.field().tol().single(self.ctx.q()))
    }
}

fn m_product_even(ctx: &SumCtx, st: Steps, e: i64, d: i64, i: i64) -> Complex64 {
    let mut m = ctx.g(-i * st.s) * ctx.g(-(d * e / 2 - i) * st.psi);
    for k in (1..d).filter(|&k| k != d / 2) {
        m *= ctx.g((i * d - k * e) * st.u);
    }
    m
}

fn m_product_odd(ctx: &SumCtx, st: Steps, e: i64, d: i64, i: i64) -> Complex64 {
    (1..d).fold(Complex64::new(1.0, 0.0), |acc, k| acc * ctx.g((i * d - k * e) * st.u))
}

fn n_product_odd(ctx: &SumCtx, st: Steps, e: i64, d: i64, i: i64) -> Complex64 {
    (1..d).fold(Complex64::new(1.0, 0.0), |acc, j| {
        acc * ctx.g(j * st.c) * ctx.g(-(j * e - i) * st.psi)
    })
}

fn check_parity(spec: &CurveSpec, even: bool) -> Result<(), CurveError> {
    if (spec.d % 2 == 0) != even || (!even && spec.d < 3) {
        return Err(CurveError::Parity(spec.d));
    }
    Ok(())
}

/// Theorem count for even d.
pub fn count_theorem_even(ctx: &SumCtx, spec: &CurveSpec) -> Result<i64, CurveError> {
    check_parity(spec, true)?;
    TheoremPlan::new(ctx, spec.e, spec.d)?.count(spec.a, spec.b)
}

/// Theorem count for odd d ≥ 3.
pub fn count_theorem_odd(ctx: &SumCtx, spec: &CurveSpec) -> Result<i64, CurveError> {
    check_parity(spec, false)?;
    TheoremPlan::new(ctx, spec.e, spec.d)?.count(spec.a, spec.b)
}

pub fn count_theorem(ctx: &SumCtx, spec: &CurveSpec) -> Result<i64, CurveError> {
    TheoremPlan::new(ctx, spec.e, spec.d)?.count(spec.a, spec.b)
}

/// α, the characters of orders d, e(d-1), ed(d-1), and every M_i (and N_i
/// for odd d) in product form and in simplified form.
#[derive(Debug, Clone)]
pub struct ThmCoeffs {
    pub alpha: Fe,
    pub chi: CharIdx,
    pub psi: CharIdx,
    pub eta: CharIdx,
    pub m_product: Vec<Complex64>,
    pub m_simplified: Vec<Complex64>,
    pub n_product: Vec<Complex64>,
    pub n_simplified: Vec<Complex64>,
}

impl ThmCoeffs {
    /// Largest |product - simplified| over all stored coefficients.
    pub fn max_discrepancy(&self) -> f64 {
        self.m_product
            .iter()
            .zip(&self.m_simplified)
            .chain(self.n_product.iter().zip(&self.n_simplified))
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

pub fn thm_coeffs(ctx: &SumCtx, spec: &CurveSpec) -> Result<ThmCoeffs, CurveError> {
    let st = steps(ctx, spec.e, spec.d)?;
    let f = ctx.field();
    let q = ctx.qf();
    let q1 = ctx.q() as i64 - 1;
    let (e, d) = (spec.e as i64, spec.d as i64);
    let ch = |m: i64| f.character(m);
    let mut out = ThmCoeffs {
        alpha: spec.alpha(f),
        chi: ch(st.c),
        psi: ch(st.psi),
        eta: ch(st.u),
        m_product: Vec::new(),
        m_simplified: Vec::new(),
        n_product: Vec::new(),
        n_simplified: Vec::new(),
    };
    let jac = |ks: Vec<i64>| ctx.jacobi_multi(&ks.into_iter().map(ch).collect::<Vec<_>>());
    for i in 1..e {
        if d % 2 == 0 {
            out.m_product.push(m_product_even(ctx, st, e, d, i));
            let simple = if e == 2 {
                q.powf(d as f64 / 2.0) * ctx.t_minus_one(st.half)
            } else {
                let w = exact_div(q1, 2 * e * (d - 1))?;
                let first = exact_div((2 * i - e) * q1, 2 * e)?;
                let sign = ctx.t_minus_one_frac((2 * i * (d - 2) + e * d) * q1, 2 * e * (d - 1))?;
                q * q * ctx.g((2 * i - e) * w) / ctx.g((i * d - d * e / 2) * st.u)
                    * ctx.binom_idx(first, i * st.s)
                    * ctx.binom_idx(st.half, (d * e / 2 - i) * st.psi)
                    * sign
                    * jac((1..d).map(|k| (i * d - k * e) * st.u).collect())
            };
            out.m_simplified.push(simple);
        } else {
            out.m_product.push(m_product_odd(ctx, st, e, d, i));
            out.n_product.push(n_product_odd(ctx, st, e, d, i));
            if e == 2 {
                let sign = ctx.t_minus_one_frac(-(d - 1) * q1, 8 * d)?;
                out.m_simplified.push(q.powf((d - 1) as f64 / 2.0) * sign);
                out.n_simplified.push(q.powi(d as i32 - 1) * sign);
            } else {
                let m = ctx.g(exact_div((2 * i - e) * q1, 2 * e)?)
                    * jac((1..d).map(|k| (i * d - k * e) * st.u).collect());
                let n = q.powf((d - 1) as f64 / 2.0)
                    * ctx.t_minus_one_frac((d * d - 1) * q1, 8 * d)?
                    * ctx.g(-exact_div((e * d - 2 * i) * q1, 2 * e)?)
                    * jac((1..d).map(|j| -(j * e - i) * st.psi).collect());
                out.m_simplified.push(m);
                out.n_simplified.push(n);
            }
        }
    }
    Ok(out)
}

/// Whether a count comes from enumeration or from the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    Bruteforce,
    Theorem,
}

/// a_q = q - N_{e,d}, with the Hasse bound enforced for y² = cubic.
pub fn trace_frobenius(ctx: &SumCtx, spec: &CurveSpec, mode: CountMode) -> Result<i64, CurveError> {
    let n = match mode {
        CountMode::Bruteforce => count_bruteforce(ctx.field(), spec) as i64,
        CountMode::Theorem => count_theorem(ctx, spec)?,
    };
    let trace = ctx.q() as i64 - n;
    if spec.e == 2 && spec.d == 3 && (trace * trace) as f64 > 4.0 * ctx.qf() {
        return Err(CurveError::Hasse { trace, q: ctx.q() });
    }
    Ok(trace)
}

/// Intermediate quantities of the character-sum derivation of qN_{e,d},
/// each from its defining sum and from its closed form.
#[derive(Debug, Clone, Copy)]
pub struct Decomposition {
    pub a_direct: Complex64,
    pub a_closed: Complex64,
    pub b_direct: Complex64,
    pub b_closed: Complex64,
    /// Σ_{x,z≠0} θ(bz)θ(zx^d)θ(azx)(1 + Σ_{y≠0} θ(-zy^e)).
    pub d_direct: Complex64,
    /// Σ_i D_i from the one-variable Gauss-sum expansion.
    pub d_gauss: Complex64,
    /// q·N - q² - qΣ_i T^{-is}(b) with N counted by enumeration.
    pub d_from_count: Complex64,
}

pub fn decomposition(ctx: &SumCtx, spec: &CurveSpec) -> Result<Decomposition, CurveError> {
    let f = ctx.field();
    let e = spec.e as i64;
    let d = spec.d as i64;
    let q1 = ctx.q() as i64 - 1;
    if q1 % e != 0 {
        return Err(CurveError::Congruence {
            q: ctx.q(),
            modulus: e as u64,
        });
    }
    let s = q1 / e;
    let q = ctx.qf();
    let (a, b) = (spec.a, spec.b);
    let th = |x: Fe| f.add_char(x);
    let a_direct = ksum(f.units().map(|z| th(f.mul(b, z))));
    let eth: Vec<Fe> = f.units().map(|y| f.pow(y, e).expect("nonnegative power")).collect();
    let inner: Vec<Complex64> = f
        .elements()
        .map(|z| ksum(eth.iter().map(|&ye| th(f.neg(f.mul(z, ye))))))
        .collect();
    let b_direct = ksum(f.units().map(|z| th(f.mul(b, z)) * inner[z.index() as usize]));
    let char_b = ksum((1..e).map(|i| ctx.t(-i * s, b)));
    let inner = &inner;
    let d_direct = ksum(f.units().flat_map(|x| {
        let poly = f.add(f.pow(x, d).expect("nonnegative power"), f.mul(a, x));
        f.units().map(move |z| {
            th(f.mul(z, f.add(poly, b))) * (1.0 + inner[z.index() as usize])
        })
    }));
    let d_gauss = ksum((1..e).map(|i| {
        let k = i * s;
        let inner = ksum((0..q1).map(|m| {
            ctx.g(k - (d - 1) * m)
                * ctx.g(-m)
                * ctx.g(m * d)
                * ctx.t((d - 1) * m - k, b)
                * ctx.t(-m * d, a)
        }));
        ctx.g(-k) * ctx.t_minus_one(k) * inner / (q - 1.0)
    }));
    let n = count_bruteforce(f, spec) as f64;
    Ok(Decomposition {
        a_direct,
        a_closed: (-1.0).into(),
        b_direct,
        b_closed: 1.0 + q * char_b,
        d_direct,
        d_gauss,
        d_from_count: q * n - q * q - q * char_b,
    })
}
