//! Gauss sums, Jacobi sums, Greene binomial coefficients and the identity
//! suite relating them.
//!
//! All Gauss sums G_m = Σ_{x≠0} T^m(x)θ(x) of a field are computed once, on
//! first use, by a compensated O(q²) double loop. Jacobi sums with all of
//! A, B, AB nontrivial come from the quotient G_A·G_B/G_{AB}; the remaining
//! (degenerate) Jacobi sums are summed from the definition and memoized.

use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::chars::{exact_div, CharError, CharIdx};
use crate::field::{Fe, FieldCtx};
use crate::kahan::{ksum, KahanSum};
use crate::report::VerifyReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SumsError {
    #[error("unknown identity {0:?}")]
    UnknownIdentity(String),
    #[error("q = {q} is not 1 modulo {modulus}")]
    Congruence { q: u32, modulus: u64 },
    #[error("degree d = {0} must be at least 2")]
    BadDegree(u32),
    #[error("identity needs odd q")]
    EvenOrder,
    #[error(transparent)]
    Char(#[from] CharError),
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Gauss sums G_0 .. G_{q-2} of one field.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussTable {
    values: Vec<Complex64>,
}

impl GaussTable {
    pub fn build(f: &FieldCtx) -> Self {
        let order = (f.q() - 1) as usize;
        let theta_by_log: Vec<Complex64> =
            (0..order).map(|k| f.add_char(f.exp(k as i64))).collect();
        let values = (0..order)
            .into_par_iter()
            .map(|m| {
                let mut acc = KahanSum::new();
                for (k, th) in theta_by_log.iter().enumerate() {
                    acc.add(f.mult_roots[m * k % order] * th);
                }
                acc.value()
            })
            .collect();
        Self { values }
    }

    pub fn get(&self, m: i64) -> Complex64 {
        self.values[m.rem_euclid(self.values.len() as i64) as usize]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// A field together with its lazily built Gauss and Jacobi tables.
pub struct SumCtx {
    field: FieldCtx,
    gauss: OnceLock<GaussTable>,
    jac_trivial: Vec<OnceLock<Complex64>>,
    jac_inverse: Vec<OnceLock<Complex64>>,
}

impl std::fmt::Debug for SumCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SumCtx")
            .field("field", &self.field)
            .field("gauss_built", &self.gauss.get().is_some())
            .finish()
    }
}

impl From<FieldCtx> for SumCtx {
    fn from(field: FieldCtx) -> Self {
        Self::new(field)
    }
}

impl SumCtx {
    pub fn new(field: FieldCtx) -> Self {
        let order = (field.q() - 1) as usize;
        Self {
            field,
            gauss: OnceLock::new(),
            jac_trivial: (0..order).map(|_| OnceLock::new()).collect(),
            jac_inverse: (0..order).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn qf(&self) -> f64 {
        self.field.q() as f64
    }

    pub fn gauss_table(&self) -> &GaussTable {
        self.gauss.get_or_init(|| GaussTable::build(&self.field))
    }

    /// G(T^m).
    pub fn gauss(&self, chi: CharIdx) -> Complex64 {
        self.gauss_table().get(chi.exponent() as i64)
    }

    /// G_m for an arbitrary integer exponent.
    pub fn g(&self, m: i64) -> Complex64 {
        self.gauss_table().get(m)
    }

    /// T^m(x) for an integer exponent.
    pub fn t(&self, m: i64, x: Fe) -> Complex64 {
        self.field.mul_char(self.field.character(m), x)
    }

    /// T^m(-1).
    pub fn t_minus_one(&self, m: i64) -> Complex64 {
        self.t(m, self.field.from_int(-1))
    }

    /// T^{num/den}(-1), failing when the exponent is not an integer.
    pub fn t_minus_one_frac(&self, num: i64, den: i64) -> Result<Complex64, CharError> {
        Ok(self.t_minus_one(exact_div(num, den)?))
    }

    /// Σ_x A(x)B(1-x), summed directly.
    pub fn jacobi_direct(&self, a: CharIdx, b: CharIdx) -> Complex64 {
        let f = &self.field;
        ksum(
            f.elements()
                .map(|x| f.mul_char(a, x) * f.mul_char(b, f.sub(Fe::ONE, x))),
        )
    }

    /// J(A, B): Gauss quotient when A, B, AB are nontrivial, memoized
    /// direct summation otherwise.
    pub fn jacobi(&self, a: CharIdx, b: CharIdx) -> Complex64 {
        let ab = a * b;
        if !a.is_trivial() && !b.is_trivial() && !ab.is_trivial() {
            return self.gauss(a) * self.gauss(b) / self.gauss(ab);
        }
        let triv = self.field.trivial_char();
        if b.is_trivial() || a.is_trivial() {
            let other = if b.is_trivial() { a } else { b };
            *self.jac_trivial[other.exponent() as usize]
                .get_or_init(|| self.jacobi_direct(other, triv))
        } else {
            *self.jac_inverse[a.exponent() as usize].get_or_init(|| self.jacobi_direct(a, b))
        }
    }

    /// Multi-argument Jacobi sum Σ_{x_1+…+x_n=1} ∏ T^{k_i}(x_i).
    ///
    /// Uses G_{k_1}…G_{k_n}/G_{k_1+…+k_n} when every character and their
    /// product are nontrivial, the convolution otherwise.
    pub fn jacobi_multi(&self, ks: &[CharIdx]) -> Complex64 {
        self.jacobi_multi_gauss(ks)
            .unwrap_or_else(|| self.jacobi_multi_convolution(ks))
    }

    /// Gauss-quotient form, `None` when its preconditions fail.
    pub fn jacobi_multi_gauss(&self, ks: &[CharIdx]) -> Option<Complex64> {
        let (first, rest) = ks.split_first()?;
        let total = rest.iter().fold(*first, |acc, &k| acc * k);
        if ks.iter().any(|k| k.is_trivial()) || total.is_trivial() {
            return None;
        }
        let num = ks
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &k| acc * self.gauss(k));
        Some(num / self.gauss(total))
    }

    /// Defining multi-sum, by (n-1)-fold additive convolution.
    pub fn jacobi_multi_convolution(&self, ks: &[CharIdx]) -> Complex64 {
        let f = &self.field;
        match ks {
            [] => ZERO,
            [_] => Complex64::new(1.0, 0.0),
            [first, middle @ .., last] => {
                let mut dist: Vec<Complex64> =
                    f.elements().map(|x| f.mul_char(*first, x)).collect();
                for &k in middle {
                    let vals: Vec<Complex64> = f.elements().map(|x| f.mul_char(k, x)).collect();
                    dist = f
                        .elements()
                        .map(|s| {
                            ksum(f.elements().map(|x| {
                                dist[x.index() as usize]
                                    * vals[f.sub(s, x).index() as usize]
                            }))
                        })
                        .collect();
                }
                ksum(f.elements().map(|x| {
                    dist[x.index() as usize] * f.mul_char(*last, f.sub(Fe::ONE, x))
                }))
            }
        }
    }

    /// Greene's binomial (A choose B) = B(-1)/q · J(A, B̄).
    pub fn binom(&self, a: CharIdx, b: CharIdx) -> Complex64 {
        let minus_one = self.field.from_int(-1);
        self.field.mul_char(b, minus_one) * self.jacobi(a, b.conj()) / self.qf()
    }

    /// Binomial from the directly summed Jacobi sum, bypassing all caches.
    pub fn binom_direct(&self, a: CharIdx, b: CharIdx) -> Complex64 {
        let minus_one = self.field.from_int(-1);
        self.field.mul_char(b, minus_one) * self.jacobi_direct(a, b.conj()) / self.qf()
    }

    pub fn binom_idx(&self, a: i64, b: i64) -> Complex64 {
        self.binom(self.field.character(a), self.field.character(b))
    }

    fn identity_tol(&self) -> f64 {
        self.field.tol().double(self.q())
    }

    /// Evaluates both sides of a named identity over its parameter grid.
    pub fn verify_identity(
        &self,
        identity: Identity,
        params: &IdentityParams,
    ) -> Result<VerifyReport, SumsError> {
        let f = &self.field;
        let order = (f.q() - 1) as i64;
        let qf = self.qf();
        let ch = |m: i64| f.character(m);
        let minus_one = f.from_int(-1);
        let ms: Vec<i64> = params.m.map_or_else(|| (0..order).collect(), |m| vec![m]);
        let ns: Vec<i64> = params.n.map_or_else(|| (0..order).collect(), |n| vec![n]);
        let xs: Vec<Fe> = params.x.map_or_else(|| f.elements().collect(), |x| vec![x]);
        let mut rep = VerifyReport::new(identity.name(), f.q());

        match identity {
            Identity::GaussNorm => {
                for &m in &ms {
                    if ch(m).is_trivial() {
                        rep.skip();
                        continue;
                    }
                    let lhs = self.g(m) * self.g(-m);
                    let rhs = qf * self.t_minus_one(m);
                    rep.observe(|| format!("m={m}"), lhs, rhs);
                }
            }
            Identity::GaussProduct => {
                for &m in &ms {
                    for &n in &ns {
                        if ch(m - n).is_trivial() {
                            rep.skip();
                            continue;
                        }
                        let lhs = self.g(m) * self.g(-n);
                        let via_binom =
                            qf * self.binom(ch(m), ch(n)) * self.g(m - n) * self.t_minus_one(n);
                        let via_jacobi = self.jacobi_direct(ch(m), ch(-n)) * self.g(m - n);
                        rep.observe(|| format!("m={m},n={n}"), lhs, via_binom);
                        rep.observe(|| format!("m={m},n={n} (jacobi)"), lhs, via_jacobi);
                    }
                }
            }
            Identity::JacobiGauss => {
                for &m in &ms {
                    for &n in &ns {
                        let ks = [ch(m), ch(n)];
                        match self.jacobi_multi_gauss(&ks) {
                            None => rep.skip(),
                            Some(v) => {
                                rep.observe(|| format!("k=({m},{n})"), v, self.jacobi_direct(ks[0], ks[1]));
                                rep.observe(
                                    || format!("k=({m},{n}) conv"),
                                    v,
                                    self.jacobi_multi_convolution(&ks),
                                );
                            }
                        }
                    }
                }
                // three-argument sums; the first convolution is shared per (k1, k2)
                let step = ((order as f64).powf(1.0 / 3.0) / 3.0).max(1.0) as usize;
                for &m in ms.iter().step_by(if params.m.is_some() { 1 } else { step }) {
                    for n in (m..order).step_by(step) {
                        for r in (n..order).step_by(step) {
                            let ks = [ch(m), ch(n), ch(r)];
                            match self.jacobi_multi_gauss(&ks) {
                                None => rep.skip(),
                                Some(v) => rep.observe(
                                    || format!("k=({m},{n},{r})"),
                                    v,
                                    self.jacobi_multi_convolution(&ks),
                                ),
                            }
                        }
                    }
                }
            }
            Identity::ThetaExpansion => {
                for &x in &xs {
                    if x.is_zero() {
                        rep.skip();
                        continue;
                    }
                    let rhs = ksum((0..order).map(|m| self.g(-m) * self.t(m, x))) / (qf - 1.0);
                    rep.observe(|| format!("x={}", f.format_elem(x)), f.add_char(x), rhs);
                }
            }
            Identity::Orthogonality => {
                for &m in &ms {
                    let lhs = ksum(f.units().map(|x| f.mul_char(ch(m), x)));
                    let rhs = if ch(m).is_trivial() { qf - 1.0 } else { 0.0 };
                    rep.observe(|| format!("sum_x T^{m}(x)"), lhs, rhs.into());
                }
                for &x in &xs {
                    if x.is_zero() {
                        continue;
                    }
                    let lhs = ksum((0..order).map(|m| self.t(m, x)));
                    let rhs = if x == Fe::ONE { qf - 1.0 } else { 0.0 };
                    rep.observe(|| format!("sum_m T^m({})", f.format_elem(x)), lhs, rhs.into());
                }
            }
            Identity::GaussSpecial => {
                rep.observe(|| "G_0".into(), self.g(0), (-1.0).into());
                if f.q() % 2 == 1 {
                    let half = ((f.q() - 1) / 2) as i64;
                    let root = qf.sqrt();
                    let rhs = if f.q() % 4 == 1 {
                        Complex64::new(root, 0.0)
                    } else {
                        Complex64::new(0.0, root)
                    };
                    rep.observe(|| "G_(q-1)/2".into(), self.g(half), rhs);
                }
            }
            Identity::GaussQuadraticLifted => {
                if f.q() % 2 == 0 {
                    return Err(SumsError::EvenOrder);
                }
                let p = f.p();
                let half = ((f.q() - 1) / 2) as i64;
                let prime_sum = if p % 4 == 1 {
                    Complex64::new((p as f64).sqrt(), 0.0)
                } else {
                    Complex64::new(0.0, (p as f64).sqrt())
                };
                let sign = if f.n() % 2 == 1 { 1.0 } else { -1.0 };
                let rhs = sign * prime_sum.powu(f.n());
                rep.observe(|| "G_(q-1)/2".into(), self.g(half), rhs);
            }
            Identity::BinomExpansion => {
                for &m in &ms {
                    let a = ch(m);
                    for &x in &xs {
                        let lhs = f.mul_char(a, f.add(Fe::ONE, x));
                        let series = ksum((0..order).map(|c| self.binom(a, ch(c)) * self.t(c, x)));
                        let delta = if x.is_zero() { 1.0 } else { 0.0 };
                        let rhs = delta + qf / (qf - 1.0) * series;
                        rep.observe(|| format!("A=T^{m},x={}", f.format_elem(x)), lhs, rhs);
                    }
                }
            }
            Identity::BinomSymmetry | Identity::BinomSwap | Identity::BinomReflect => {
                for &m in &ms {
                    for &n in &ns {
                        let (a, b) = (ch(m), ch(n));
                        let lhs = self.binom(a, b);
                        let rhs = match identity {
                            Identity::BinomSymmetry => self.binom(a, a * b.conj()),
                            Identity::BinomSwap => {
                                self.binom(b * a.conj(), b) * f.mul_char(b, minus_one)
                            }
                            _ => self.binom(b.conj(), a.conj()) * f.mul_char(a * b, minus_one),
                        };
                        rep.observe(|| format!("A=T^{m},B=T^{n}"), lhs, rhs);
                    }
                }
            }
            Identity::AdditiveDelta => {
                let ys: Vec<Fe> = params.y.map_or_else(|| f.elements().collect(), |y| vec![y]);
                for &x in &xs {
                    for &y in &ys {
                        let diff = f.sub(x, y);
                        let lhs = ksum(f.elements().map(|z| f.add_char(f.mul(z, diff))));
                        let rhs = if x == y { qf } else { 0.0 };
                        rep.observe(
                            || format!("x={},y={}", f.format_elem(x), f.format_elem(y)),
                            lhs,
                            rhs.into(),
                        );
                    }
                }
            }
        }
        Ok(rep.finish(self.identity_tol()))
    }

    /// Product of the d Gauss sums G_{l + t·j(q-1)/d} against its closed form.
    ///
    /// `l` and `t` default to the full sweep l ∈ [0, q-2], t ∈ {1, -1}.
    pub fn davenport_hasse(
        &self,
        d: u32,
        l: Option<i64>,
        t: Option<i64>,
    ) -> Result<VerifyReport, SumsError> {
        let f = &self.field;
        let q = f.q() as i64;
        if d < 2 {
            return Err(SumsError::BadDegree(d));
        }
        if (q - 1) % d as i64 != 0 {
            return Err(SumsError::Congruence {
                q: f.q(),
                modulus: d as u64,
            });
        }
        let d64 = d as i64;
        let step = (q - 1) / d64;
        let qf = self.qf();
        let d_pow_d = f
            .pow(f.from_int(d64), d64)
            .expect("d is a unit when q = 1 mod d");
        // constant factor ∏_{j=1}^{d-1} G_{j(q-1)/d}
        let constant = if d % 2 == 1 {
            qf.powf((d64 - 1) as f64 / 2.0)
                * self.t_minus_one_frac((d64 - 1) * (d64 + 1) * (q - 1), 8 * d64)?
        } else {
            qf.powf((d64 - 2) as f64 / 2.0)
                * self.g((q - 1) / 2)
                * self.t_minus_one_frac((d64 - 2) * (q - 1), 8)?
        };
        let ls: Vec<i64> = l.map_or_else(|| (0..q - 1).collect(), |l| vec![l]);
        let ts: Vec<i64> = t.map_or_else(|| vec![1, -1], |t| vec![t]);
        let mut rep = VerifyReport::new("davenport-hasse", f.q());
        rep.d = Some(d);
        for &l in &ls {
            let rhs = constant * self.t(-l, d_pow_d) * self.g(l * d64);
            for &t in &ts {
                let lhs = (0..d64).fold(Complex64::new(1.0, 0.0), |acc, j| {
                    acc * self.g(l + t * j * step)
                });
                rep.observe(|| format!("d={d},l={l},t={t}"), lhs, rhs);
            }
        }
        let scale = qf.powf(d as f64 / 2.0);
        Ok(rep.finish(f.tol().single(f.q()) * scale))
    }
}

/// Free parameters of an identity; `None` sweeps the full range.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityParams {
    /// First character exponent (m, or A = T^m).
    pub m: Option<i64>,
    /// Second character exponent (n, or B = T^n).
    pub n: Option<i64>,
    pub x: Option<Fe>,
    pub y: Option<Fe>,
}

/// The identities checked numerically over a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Identity {
    /// G_m G_{-m} = q T^m(-1) for T^m nontrivial.
    GaussNorm,
    /// G_m G_{-n} = q (T^m choose T^n) G_{m-n} T^n(-1) = J(T^m, T^{-n}) G_{m-n}.
    GaussProduct,
    /// J(T^{k_1}, …, T^{k_n}) = ∏ G_{k_i} / G_{Σ k_i} for nontrivial data.
    JacobiGauss,
    /// θ(α) = 1/(q-1) Σ_m G_{-m} T^m(α).
    ThetaExpansion,
    /// Both character orthogonality relations.
    Orthogonality,
    /// G_0 = -1 and G_φ = √q (q ≡ 1 mod 4) or i√q (q ≡ 3 mod 4).
    GaussSpecial,
    /// G_φ = (-1)^{n-1} (G_φ over F_p)^n.
    GaussQuadraticLifted,
    /// A(1+x) = δ(x) + q/(q-1) Σ_χ (A choose χ) χ(x).
    BinomExpansion,
    /// (A choose B) = (A choose AB̄).
    BinomSymmetry,
    /// (A choose B) = (BĀ choose B) B(-1).
    BinomSwap,
    /// (A choose B) = (B̄ choose Ā) AB(-1).
    BinomReflect,
    /// Σ_z θ(z(x-y)) = q δ(x, y).
    AdditiveDelta,
}

impl Identity {
    pub const ALL: [Identity; 12] = [
        Identity::GaussNorm,
        Identity::GaussProduct,
        Identity::JacobiGauss,
        Identity::ThetaExpansion,
        Identity::Orthogonality,
        Identity::GaussSpecial,
        Identity::GaussQuadraticLifted,
        Identity::BinomExpansion,
        Identity::BinomSymmetry,
        Identity::BinomSwap,
        Identity::BinomReflect,
        Identity::AdditiveDelta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::GaussNorm => "gauss-norm",
            Identity::GaussProduct => "gauss-product",
            Identity::JacobiGauss => "jacobi-gauss",
            Identity::ThetaExpansion => "theta-expansion",
            Identity::Orthogonality => "orthogonality",
            Identity::GaussSpecial => "gauss-special",
            Identity::GaussQuadraticLifted => "gauss-quadratic-lifted",
            Identity::BinomExpansion => "binom-expansion",
            Identity::BinomSymmetry => "binom-symmetry",
            Identity::BinomSwap => "binom-swap",
            Identity::BinomReflect => "binom-reflect",
            Identity::AdditiveDelta => "additive-delta",
        }
    }
}

impl FromStr for Identity {
    type Err = SumsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| SumsError::UnknownIdentity(s.to_string()))
    }
}
