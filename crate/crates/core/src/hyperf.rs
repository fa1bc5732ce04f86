//! Greene's Gaussian hypergeometric series over F_q:
//!
//! ```text
//! F(A_0, …, A_n; B_1, …, B_n | x) = q/(q-1) Σ_χ (A_0χ choose χ) ∏ (A_iχ choose B_iχ) χ(x)
//! ```
//!
//! The coefficient of each χ does not depend on x, so a [`Series`] holds the
//! q-1 coefficients and evaluates any argument in O(q).

use num_complex::Complex64;
use thiserror::Error;

use crate::chars::CharIdx;
use crate::field::Fe;
use crate::kahan::ksum;
use crate::sums::SumCtx;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HfError {
    #[error("expected one more upper parameter than lower, got {upper} upper and {lower} lower")]
    Arity { upper: usize, lower: usize },
}

/// Parameters and argument of one series evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct HFSpec {
    pub upper: Vec<CharIdx>,
    pub lower: Vec<CharIdx>,
    pub x: Fe,
}

impl HFSpec {
    pub fn new(upper: Vec<CharIdx>, lower: Vec<CharIdx>, x: Fe) -> Result<Self, HfError> {
        check_arity(upper.len(), lower.len())?;
        Ok(Self { upper, lower, x })
    }
}

fn check_arity(upper: usize, lower: usize) -> Result<(), HfError> {
    if upper != lower + 1 {
        return Err(HfError::Arity { upper, lower });
    }
    Ok(())
}

/// Where the binomial coefficients come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BinomSource {
    /// Gauss quotients and memoized degenerate Jacobi sums.
    #[default]
    Cached,
    /// Every Jacobi sum recomputed by additive convolution.
    Convolution,
}

/// The x-independent part of a series: one coefficient per character.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    coeffs: Vec<Complex64>,
    scale: f64,
}

impl Series {
    pub fn prepare(
        ctx: &SumCtx,
        upper: &[CharIdx],
        lower: &[CharIdx],
        source: BinomSource,
    ) -> Result<Self, HfError> {
        check_arity(upper.len(), lower.len())?;
        let f = ctx.field();
        let order = f.q() - 1;
        let binom = |a: CharIdx, b: CharIdx| match source {
            BinomSource::Cached => ctx.binom(a, b),
            BinomSource::Convolution => {
                f.mul_char(b, f.from_int(-1)) * ctx.jacobi_multi_convolution(&[a, b.conj()])
                    / ctx.qf()
            }
        };
        let coeffs = (0..order as i64)
            .map(|m| {
                let chi = f.character(m);
                let head = binom(upper[0] * chi, chi);
                upper[1..]
                    .iter()
                    .zip(lower)
                    .fold(head, |acc, (&a, &b)| acc * binom(a * chi, b * chi))
            })
            .collect();
        let qf = ctx.qf();
        Ok(Self {
            coeffs,
            scale: qf / (qf - 1.0),
        })
    }

    pub fn prepare_idx(ctx: &SumCtx, upper: &[i64], lower: &[i64]) -> Result<Self, HfError> {
        let f = ctx.field();
        let up: Vec<CharIdx> = upper.iter().map(|&m| f.character(m)).collect();
        let lo: Vec<CharIdx> = lower.iter().map(|&m| f.character(m)).collect();
        Self::prepare(ctx, &up, &lo, BinomSource::Cached)
    }

    /// Coefficient of T^m.
    pub fn coefficient(&self, m: usize) -> Complex64 {
        self.coeffs[m]
    }

    pub fn eval(&self, ctx: &SumCtx, x: Fe) -> Complex64 {
        let f = ctx.field();
        let Ok(k) = f.dlog(x) else {
            return Complex64::new(0.0, 0.0);
        };
        let order = self.coeffs.len();
        let k = k as usize;
        let roots = &f.mult_roots;
        self.scale
            * ksum(
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(m, c)| c * roots[m * k % order]),
            )
    }
}

pub fn hf_eval(ctx: &SumCtx, spec: &HFSpec) -> Result<Complex64, HfError> {
    Ok(Series::prepare(ctx, &spec.upper, &spec.lower, BinomSource::Cached)?.eval(ctx, spec.x))
}

/// Series given by character exponents.
pub fn hf_idx(ctx: &SumCtx, upper: &[i64], lower: &[i64], x: Fe) -> Result<Complex64, HfError> {
    Ok(Series::prepare_idx(ctx, upper, lower)?.eval(ctx, x))
}
