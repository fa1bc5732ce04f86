//! Multiplicative characters T^m, the canonical additive character θ, the
//! Legendre symbol and the two δ indicators.
//!
//! T is the generator of the character group fixed by the canonical
//! generator g of F_q^*: T^m(g^k) = e^{2πi·mk/(q-1)}. Every character,
//! the trivial one included, is extended by χ(0) = 0.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;
use thiserror::Error;

use crate::field::{Fe, FieldCtx};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CharError {
    #[error("the quadratic character needs odd q, got q = {0}")]
    EvenOrder(u32),
    #[error("exponent {num}/{den} is not an integer")]
    NonIntegral { num: i64, den: i64 },
}

/// e^{2πik/n} for k in 0..n, one trigonometric evaluation per entry.
pub(crate) fn unit_roots(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
        .collect()
}

/// The character T^m, exponent reduced modulo q - 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct CharIdx {
    m: u32,
    modulus: u32,
}

impl fmt::Debug for CharIdx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T^{} (mod {})", self.m, self.modulus)
    }
}

impl CharIdx {
    pub fn new(m: i64, modulus: u32) -> Self {
        Self {
            m: m.rem_euclid(modulus as i64) as u32,
            modulus,
        }
    }

    pub fn exponent(self) -> u32 {
        self.m
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_trivial(self) -> bool {
        self.m == 0
    }

    /// Order of T^m in the character group: (q-1)/gcd(q-1, m).
    pub fn order(self) -> u32 {
        self.modulus / gcd(self.modulus, self.m)
    }

    /// The conjugate character, T^{-m}.
    pub fn conj(self) -> Self {
        -self
    }

    pub fn pow(self, k: i64) -> Self {
        let e = (self.m as i64 * k.rem_euclid(self.modulus as i64)) % self.modulus as i64;
        Self::new(e, self.modulus)
    }
}

impl Mul for CharIdx {
    type Output = CharIdx;

    fn mul(self, rhs: CharIdx) -> CharIdx {
        debug_assert_eq!(self.modulus, rhs.modulus, "characters of different fields");
        CharIdx::new(self.m as i64 + rhs.m as i64, self.modulus)
    }
}

impl Neg for CharIdx {
    type Output = CharIdx;

    fn neg(self) -> CharIdx {
        CharIdx::new(-(self.m as i64), self.modulus)
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `num / den` when it is an integer.
pub fn exact_div(num: i64, den: i64) -> Result<i64, CharError> {
    if den == 0 || num % den != 0 {
        return Err(CharError::NonIntegral { num, den });
    }
    Ok(num / den)
}

impl FieldCtx {
    /// T^m with m taken modulo q - 1.
    pub fn character(&self, m: i64) -> CharIdx {
        CharIdx::new(m, self.q() - 1)
    }

    /// T^{k(q-1)/r}, the canonical character of order dividing r.
    pub fn char_of_order(&self, k: i64, r: i64) -> Result<CharIdx, CharError> {
        let step = exact_div((self.q() - 1) as i64, r)?;
        Ok(self.character(k * step))
    }

    pub fn trivial_char(&self) -> CharIdx {
        self.character(0)
    }

    /// φ = T^{(q-1)/2}, the quadratic character.
    pub fn quadratic_char(&self) -> Result<CharIdx, CharError> {
        if self.q() % 2 == 0 {
            return Err(CharError::EvenOrder(self.q()));
        }
        Ok(self.character(((self.q() - 1) / 2) as i64))
    }

    /// T^m(x), zero at x = 0.
    pub fn mul_char(&self, chi: CharIdx, x: Fe) -> Complex64 {
        match self.dlog(x) {
            Err(_) => Complex64::new(0.0, 0.0),
            Ok(k) => {
                let idx = chi.exponent() as u64 * k as u64 % (self.q() as u64 - 1);
                self.mult_roots[idx as usize]
            }
        }
    }

    /// T^m evaluated at an integer (mapped into the prime subfield).
    pub fn mul_char_int(&self, chi: CharIdx, v: i64) -> Complex64 {
        self.mul_char(chi, self.from_int(v))
    }

    /// θ(x) = e^{2πi·tr(x)/p}.
    pub fn add_char(&self, x: Fe) -> Complex64 {
        self.add_roots[self.trace(x).index() as usize]
    }

    /// Legendre symbol of x in F_q.
    pub fn legendre(&self, x: Fe) -> Result<i8, CharError> {
        if self.q() % 2 == 0 {
            return Err(CharError::EvenOrder(self.q()));
        }
        Ok(match self.dlog(x) {
            Err(_) => 0,
            Ok(k) if k % 2 == 0 => 1,
            Ok(_) => -1,
        })
    }
}

/// δ(x): 1 at zero, else 0.
pub fn delta_elem(x: Fe) -> u8 {
    x.is_zero() as u8
}

/// δ(A): 1 for the trivial character, else 0.
pub fn delta_char(chi: CharIdx) -> u8 {
    chi.is_trivial() as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn values_at_zero_and_trivial() {
        let f = FieldCtx::new(13, 1).unwrap();
        for m in 0..12 {
            assert_eq!(f.mul_char(f.character(m), Fe::ZERO), Complex64::new(0.0, 0.0));
        }
        for x in f.units() {
            assert_eq!(f.mul_char(f.trivial_char(), x), Complex64::new(1.0, 0.0));
        }
        let phi = f.quadratic_char().unwrap();
        assert!(close(f.mul_char(phi, f.elem(4)), Complex64::new(1.0, 0.0), 1e-12));
    }

    #[test]
    fn additive_character() {
        let f = FieldCtx::new(13, 1).unwrap();
        assert_eq!(f.add_char(Fe::ZERO), Complex64::new(1.0, 0.0));
        let zeta = Complex64::from_polar(1.0, TAU / 13.0);
        assert!(close(f.add_char(Fe::ONE), zeta, 1e-12));
        let f9 = FieldCtx::new(3, 2).unwrap();
        let t = f9.from_coefficients(&[0, 1]).unwrap();
        assert!(close(f9.add_char(t), Complex64::new(1.0, 0.0), 1e-12));
        for x in f9.elements() {
            for y in f9.elements() {
                let lhs = f9.add_char(f9.add(x, y));
                assert!(close(lhs, f9.add_char(x) * f9.add_char(y), 1e-12));
            }
        }
    }

    #[test]
    fn legendre_symbol() {
        let f = FieldCtx::new(13, 1).unwrap();
        assert_eq!(f.legendre(Fe::ZERO).unwrap(), 0);
        assert_eq!(f.legendre(f.elem(4)).unwrap(), 1);
        assert_eq!(f.legendre(f.elem(2)).unwrap(), -1);
        let phi = f.quadratic_char().unwrap();
        for x in f.elements() {
            let v = f.legendre(x).unwrap() as f64;
            assert!(close(f.mul_char(phi, x), Complex64::new(v, 0.0), 1e-12));
            // Euler's criterion in the prime field
            let euler = (1..=6).fold(1u64, |acc, _| acc * x.index() as u64 % 13);
            let expect = match euler {
                0 => 0,
                1 => 1,
                _ => -1,
            };
            assert_eq!(f.legendre(x).unwrap(), expect);
        }
        let f8 = FieldCtx::new(2, 3).unwrap();
        assert_eq!(f8.legendre(Fe::ONE), Err(CharError::EvenOrder(8)));
    }

    #[test]
    fn deltas() {
        let f = FieldCtx::new(13, 1).unwrap();
        assert_eq!(delta_elem(Fe::ZERO), 1);
        assert_eq!(delta_elem(Fe::ONE), 0);
        assert_eq!(delta_char(f.trivial_char()), 1);
        assert_eq!(delta_char(f.quadratic_char().unwrap()), 0);
    }

    #[test]
    fn char_index_algebra() {
        let f = FieldCtx::new(13, 1).unwrap();
        let a = f.character(5);
        assert_eq!((a * a.conj()).exponent(), 0);
        assert_eq!(a.pow(3).exponent(), 3);
        assert_eq!(f.character(-1).exponent(), 11);
        assert_eq!(f.character(4).order(), 3);
        assert_eq!(f.character(5).order(), 12);
        assert_eq!(f.character(0).order(), 1);
        assert_eq!(f.char_of_order(1, 4).unwrap().exponent(), 3);
        assert!(f.char_of_order(1, 5).is_err());
    }

    #[test]
    fn orthogonality_and_multiplicativity() {
        for &(p, n) in &[(13, 1), (5, 2), (2, 4)] {
            let f = FieldCtx::new(p, n).unwrap();
            let q = f.q() as f64;
            let tol = f.tol().single(f.q());
            for m in 0..(f.q() - 1) as i64 {
                let chi = f.character(m);
                let s: Complex64 = f.units().map(|x| f.mul_char(chi, x)).sum();
                let expect = if m == 0 { q - 1.0 } else { 0.0 };
                assert!(close(s, Complex64::new(expect, 0.0), tol));
                for x in f.units() {
                    assert!(close(f.mul_char(-chi, x), f.mul_char(chi, x).conj(), 1e-12));
                    for y in f.units().step_by(3) {
                        let lhs = f.mul_char(chi, f.mul(x, y));
                        assert!(close(lhs, f.mul_char(chi, x) * f.mul_char(chi, y), 1e-9));
                    }
                }
            }
            for x in f.units() {
                let s: Complex64 = (0..(f.q() - 1) as i64)
                    .map(|m| f.mul_char(f.character(m), x))
                    .sum();
                let expect = if x == Fe::ONE { q - 1.0 } else { 0.0 };
                assert!(close(s, Complex64::new(expect, 0.0), tol));
            }
        }
    }
}
