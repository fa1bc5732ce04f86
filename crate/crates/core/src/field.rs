//! Finite fields F_q, q = p^n, backed by exponent/logarithm tables.
//!
//! Elements are stored by their canonical index: for a prime field the
//! integer representative in `[0, p)`, for an extension the base-p number
//! `c_0 + c_1 p + ... + c_{n-1} p^{n-1}` built from the coefficient vector of
//! the element as a polynomial in the generator of the extension. The same
//! integer encoding is the canonical ordering used to pick both the modulus
//! and the multiplicative generator, so rebuilding a field always produces
//! identical tables.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::chars::unit_roots;

/// Default upper bound on q.
pub const DEFAULT_SIZE_CAP: u32 = 65_536;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {q} exceeds size cap {cap}")]
    TooLarge { q: u64, cap: u32 },
    #[error("no irreducible polynomial of degree {n} over F_{p}")]
    NoIrreducible { p: u32, n: u32 },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("discrete logarithm of zero")]
    ZeroLog,
    #[error("invalid element literal {0:?}")]
    BadLiteral(String),
}

/// Absolute tolerance policy for floating character sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub base: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { base: 1e-9 }
    }
}

impl Tolerance {
    /// Tolerance for a sum of at most q unit-size terms.
    pub fn single(&self, q: u32) -> f64 {
        self.base * q as f64
    }

    /// Tolerance for double sums (q² terms) and products of two Gauss sums.
    pub fn double(&self, q: u32) -> f64 {
        self.base * (q as f64) * (q as f64)
    }
}

/// Canonical representative of an element of F_q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    /// Canonical index of the element.
    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FieldOptions {
    pub size_cap: u32,
    pub tol: Tolerance,
}

impl Default for FieldOptions {
    fn default() -> Self {
        Self {
            size_cap: DEFAULT_SIZE_CAP,
            tol: Tolerance::default(),
        }
    }
}

/// Immutable description of F_q with generator, logarithm and trace tables.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    n: u32,
    q: u32,
    /// Monic modulus, coefficients low to high including the leading 1.
    modulus: Option<Vec<u32>>,
    generator: Fe,
    exp: Vec<u32>,
    log: Vec<u32>,
    trace: Vec<u32>,
    size_cap: u32,
    tol: Tolerance,
    pub(crate) mult_roots: Vec<Complex64>,
    pub(crate) add_roots: Vec<Complex64>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("n", &self.n)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish_non_exhaustive()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits q into (p, n) with q = p^n, if q is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut rest = q;
    let mut n = 0;
    while rest % p == 0 {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p as u32, n))
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomials over F_p, coefficients low to high.
mod poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let p = p as u64;
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p;
            }
        }
        let mut out: Vec<u32> = out.into_iter().map(|c| c as u32).collect();
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo the monic polynomial `m`.
    pub fn rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let p64 = p as u64;
        while r.len() > dm {
            let lead = *r.last().unwrap() as u64;
            let shift = r.len() - 1 - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = lead * c as u64 % p64;
                let cur = r[shift + i] as u64;
                r[shift + i] = ((cur + p64 - sub) % p64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    /// Base-p digits of `idx`, `len` of them.
    pub fn digits(mut idx: u64, p: u32, len: u32) -> Vec<u32> {
        let mut out = Vec::with_capacity(len as usize);
        for _ in 0..len {
            out.push((idx % p as u64) as u32);
            idx /= p as u64;
        }
        out
    }

    pub fn from_digits(c: &[u32], p: u32) -> u32 {
        c.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64) as u32
    }

    /// True if the monic polynomial `f` of degree n has no monic factor of
    /// degree 1..=n/2.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let n = (f.len() - 1) as u32;
        for k in 1..=n / 2 {
            let count = (p as u64).pow(k);
            for idx in 0..count {
                let mut g = digits(idx, p, k);
                g.push(1);
                if rem_monic(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

impl FieldCtx {
    /// Builds F_{p^n} with the default options.
    pub fn new(p: u32, n: u32) -> Result<Self, FieldError> {
        Self::with_options(p, n, FieldOptions::default())
    }

    /// Builds F_q from its order.
    pub fn from_order(q: u64, opts: FieldOptions) -> Result<Self, FieldError> {
        let (p, n) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::with_options(p, n, opts)
    }

    pub fn with_options(p: u32, n: u32, opts: FieldOptions) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        if n == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(n).unwrap_or(u64::MAX);
        if q > opts.size_cap as u64 {
            return Err(FieldError::TooLarge {
                q,
                cap: opts.size_cap,
            });
        }
        let q = q as u32;

        let modulus = if n == 1 {
            None
        } else {
            let found = (0..q as u64).find_map(|idx| {
                let mut f = poly::digits(idx, p, n);
                f.push(1);
                poly::is_irreducible(&f, p).then_some(f)
            });
            Some(found.ok_or(FieldError::NoIrreducible { p, n })?)
        };

        let mul = |x: u32, y: u32| -> u32 {
            match &modulus {
                None => (x as u64 * y as u64 % p as u64) as u32,
                Some(m) => {
                    let mut a = poly::digits(x as u64, p, n);
                    let mut b = poly::digits(y as u64, p, n);
                    poly::trim(&mut a);
                    poly::trim(&mut b);
                    let r = poly::rem_monic(&poly::mul(&a, &b, p), m, p);
                    poly::from_digits(&r, p)
                }
            }
        };
        let pow = |x: u32, mut k: u64| -> u32 {
            let mut base = x;
            let mut acc = 1u32;
            while k > 0 {
                if k & 1 == 1 {
                    acc = mul(acc, base);
                }
                base = mul(base, base);
                k >>= 1;
            }
            acc
        };

        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let generator = (1..q)
            .find(|&x| factors.iter().all(|&r| pow(x, order / r) != 1))
            .expect("F_q^* is cyclic");

        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; q as usize];
        let mut cur = 1u32;
        for k in 0..order as u32 {
            exp.push(cur);
            log[cur as usize] = k;
            cur = mul(cur, generator);
        }
        debug_assert_eq!(cur, 1);

        let mut ctx = FieldCtx {
            p,
            n,
            q,
            modulus,
            generator: Fe(generator),
            exp,
            log,
            trace: Vec::new(),
            size_cap: opts.size_cap,
            tol: opts.tol,
            mult_roots: unit_roots(order as usize),
            add_roots: unit_roots(p as usize),
        };
        ctx.trace = (0..q).map(|x| ctx.trace_slow(Fe(x)).0).collect();
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn size_cap(&self) -> u32 {
        self.size_cap
    }

    pub fn tol(&self) -> Tolerance {
        self.tol
    }

    /// Monic modulus (coefficients low to high), absent for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    pub fn generator(&self) -> Fe {
        self.generator
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.q).map(Fe)
    }

    /// Nonzero elements in canonical order.
    pub fn units(&self) -> impl Iterator<Item = Fe> + '_ {
        (1..self.q).map(Fe)
    }

    /// Element with canonical index `idx`.
    pub fn elem(&self, idx: u32) -> Fe {
        assert!(idx < self.q, "index {idx} out of range for F_{}", self.q);
        Fe(idx)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        Fe(v.rem_euclid(self.p as i64) as u32)
    }

    pub fn coefficients(&self, x: Fe) -> Vec<u32> {
        poly::digits(x.0 as u64, self.p, self.n)
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Result<Fe, FieldError> {
        if c.len() > self.n as usize || c.iter().any(|&d| d >= self.p) {
            return Err(FieldError::BadLiteral(format!("{c:?}")));
        }
        Ok(Fe(poly::from_digits(c, self.p)))
    }

    /// Parses an element literal: an integer (reduced into the prime
    /// subfield) or a comma-separated coefficient vector, constant term first.
    pub fn parse_elem(&self, s: &str) -> Result<Fe, FieldError> {
        let bad = || FieldError::BadLiteral(s.to_string());
        let s = s.trim();
        if s.contains(',') {
            let c = s
                .split(',')
                .map(|t| t.trim().parse::<i64>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            if c.len() > self.n as usize {
                return Err(bad());
            }
            let c: Vec<u32> = c
                .into_iter()
                .map(|v| v.rem_euclid(self.p as i64) as u32)
                .collect();
            self.from_coefficients(&c)
        } else {
            s.parse::<i64>().map(|v| self.from_int(v)).map_err(|_| bad())
        }
    }

    /// Literal form of an element, inverse of [`FieldCtx::parse_elem`].
    pub fn format_elem(&self, x: Fe) -> String {
        if self.n == 1 {
            x.0.to_string()
        } else {
            self.coefficients(x)
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    }

    pub fn add(&self, x: Fe, y: Fe) -> Fe {
        if self.n == 1 {
            return Fe(((x.0 as u64 + y.0 as u64) % self.p as u64) as u32);
        }
        let (mut a, mut b, mut out, mut scale) = (x.0, y.0, 0u32, 1u32);
        for _ in 0..self.n {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale = scale.wrapping_mul(self.p);
        }
        Fe(out)
    }

    pub fn neg(&self, x: Fe) -> Fe {
        if self.n == 1 {
            return Fe((self.p - x.0) % self.p);
        }
        let (mut a, mut out, mut scale) = (x.0, 0u32, 1u32);
        for _ in 0..self.n {
            out += ((self.p - a % self.p) % self.p) * scale;
            a /= self.p;
            scale = scale.wrapping_mul(self.p);
        }
        Fe(out)
    }

    pub fn sub(&self, x: Fe, y: Fe) -> Fe {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: Fe, y: Fe) -> Fe {
        if x.is_zero() || y.is_zero() {
            return Fe::ZERO;
        }
        let k = (self.log[x.0 as usize] as u64 + self.log[y.0 as usize] as u64)
            % (self.q as u64 - 1);
        Fe(self.exp[k as usize])
    }

    pub fn inv(&self, x: Fe) -> Result<Fe, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        let order = self.q - 1;
        Ok(Fe(self.exp[((order - self.log[x.0 as usize]) % order) as usize]))
    }

    pub fn div(&self, x: Fe, y: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(x, self.inv(y)?))
    }

    /// x^k; negative k requires x ≠ 0, and 0^0 = 1.
    pub fn pow(&self, x: Fe, k: i64) -> Result<Fe, FieldError> {
        if x.is_zero() {
            return match k {
                0 => Ok(Fe::ONE),
                k if k > 0 => Ok(Fe::ZERO),
                _ => Err(FieldError::ZeroInverse),
            };
        }
        let order = (self.q - 1) as i64;
        let e = (self.log[x.0 as usize] as i64 * k.rem_euclid(order)).rem_euclid(order);
        Ok(Fe(self.exp[e as usize]))
    }

    /// g^k for the canonical generator g.
    pub fn exp(&self, k: i64) -> Fe {
        Fe(self.exp[k.rem_euclid((self.q - 1) as i64) as usize])
    }

    /// Discrete logarithm base the canonical generator, in `[0, q-2]`.
    pub fn dlog(&self, x: Fe) -> Result<u32, FieldError> {
        if x.is_zero() {
            return Err(FieldError::ZeroLog);
        }
        Ok(self.log[x.0 as usize])
    }

    /// Absolute trace to F_p, returned as an element of the prime subfield.
    pub fn trace(&self, x: Fe) -> Fe {
        Fe(self.trace[x.0 as usize])
    }

    fn trace_slow(&self, x: Fe) -> Fe {
        if x.is_zero() {
            return Fe::ZERO;
        }
        let order = (self.q - 1) as u64;
        let k = self.log[x.0 as usize] as u64;
        let mut acc = Fe::ZERO;
        let mut frob = 1u64;
        for _ in 0..self.n {
            acc = self.add(acc, Fe(self.exp[(k * frob % order) as usize]));
            frob = frob * self.p as u64 % order;
        }
        debug_assert!(acc.0 < self.p, "trace left the prime subfield");
        acc
    }

    /// Both square roots of a nonzero square, canonical root first.
    ///
    /// The canonical root is the one with the smaller discrete logarithm.
    pub fn sqrt(&self, x: Fe) -> Option<(Fe, Fe)> {
        if x.is_zero() {
            return Some((Fe::ZERO, Fe::ZERO));
        }
        let k = self.log[x.0 as usize];
        if self.p == 2 {
            // squaring is a bijection; the root is x^{q/2}
            let r = self.pow(x, (self.q / 2) as i64).expect("x is nonzero");
            return Some((r, r));
        }
        if k % 2 != 0 {
            return None;
        }
        let order = self.q - 1;
        let lo = k / 2;
        let hi = (lo + order / 2) % order;
        let (a, b) = (lo.min(hi), lo.max(hi));
        Some((Fe(self.exp[a as usize]), Fe(self.exp[b as usize])))
    }
}
