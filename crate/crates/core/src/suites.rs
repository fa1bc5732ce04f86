//! Report-producing drivers shared by the command line and the tests.

use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::apps::{self, fill_count, AppError, EdwardsSpec, RootChoice, SpecialValue};
use crate::curves::{count_bruteforce, CurveError, CurveSpec, TheoremPlan};
use crate::field::{Fe, FieldCtx};
use crate::report::VerifyReport;
use crate::sums::{Identity, IdentityParams, SumCtx, SumsError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SuiteError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("suite {suite} does not apply to q = {q}")]
    Inapplicable { suite: &'static str, q: u32 },
    #[error(transparent)]
    Sums(#[from] SumsError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    App(#[from] AppError),
}

/// Which coefficient pairs (a, b) a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairs {
    Single(Fe, Fe),
    /// Every pair of units, in canonical order.
    Sweep,
    /// Independent uniform draws of units from a seeded stream.
    Random { samples: usize, seed: u64 },
}

impl Pairs {
    pub fn select(&self, f: &FieldCtx) -> Vec<(Fe, Fe)> {
        match *self {
            Pairs::Single(a, b) => vec![(a, b)],
            Pairs::Sweep => f.units().flat_map(|a| f.units().map(move |b| (a, b))).collect(),
            Pairs::Random { samples, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..samples)
                    .map(|_| (random_unit(f, &mut rng), random_unit(f, &mut rng)))
                    .collect()
            }
        }
    }
}

fn random_unit(f: &FieldCtx, rng: &mut ChaCha8Rng) -> Fe {
    f.elem(rng.gen_range(1..f.q()))
}

fn timed<T>(run: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = run();
    (out, start.elapsed().as_secs_f64() * 1e3)
}

/// Theorem count against enumeration, one report per pair.
pub fn run_count(
    ctx: &SumCtx,
    e: u32,
    d: u32,
    pairs: &[(Fe, Fe)],
) -> Result<Vec<VerifyReport>, SuiteError> {
    let plan = TheoremPlan::new(ctx, e, d)?;
    let f = ctx.field();
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let spec = CurveSpec::new(e, d, a, b)?;
            let ((value, brute), ms) =
                timed(|| (plan.value(a, b), count_bruteforce(f, &spec) as i64));
            let mut rep = coefficient_report("count", f, a, b);
            rep.e = Some(e);
            rep.d = Some(d);
            fill_count(&mut rep, ctx, value?, brute);
            rep.ms = ms;
            Ok(rep)
        })
        .collect()
}

fn coefficient_report(suite: &str, f: &FieldCtx, a: Fe, b: Fe) -> VerifyReport {
    let mut rep = VerifyReport::new(suite, f.q());
    rep.a = Some(f.format_elem(a));
    rep.b = Some(f.format_elem(b));
    rep.case = format!("a={},b={}", f.format_elem(a), f.format_elem(b));
    rep
}

/// Named verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Lemmas,
    DavenportHasse,
    BinomProps,
    SpecialValues,
    Cor42,
    Edwards,
    Lennon,
    E34,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Lemmas,
        Suite::DavenportHasse,
        Suite::BinomProps,
        Suite::SpecialValues,
        Suite::Cor42,
        Suite::Edwards,
        Suite::Lennon,
        Suite::E34,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemmas => "lemmas",
            Suite::DavenportHasse => "davenport-hasse",
            Suite::BinomProps => "binom-props",
            Suite::SpecialValues => "special-values",
            Suite::Cor42 => "cor42",
            Suite::Edwards => "edwards",
            Suite::Lennon => "lennon",
            Suite::E34 => "e34",
        }
    }
}

impl FromStr for Suite {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| SuiteError::UnknownSuite(s.to_string()))
    }
}

/// Identities making up the `lemmas` suite.
pub const LEMMA_IDENTITIES: [Identity; 8] = [
    Identity::GaussNorm,
    Identity::GaussProduct,
    Identity::JacobiGauss,
    Identity::ThetaExpansion,
    Identity::Orthogonality,
    Identity::GaussSpecial,
    Identity::GaussQuadraticLifted,
    Identity::AdditiveDelta,
];

/// Identities making up the `binom-props` suite.
pub const BINOM_IDENTITIES: [Identity; 4] = [
    Identity::BinomExpansion,
    Identity::BinomSymmetry,
    Identity::BinomSwap,
    Identity::BinomReflect,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Degree for the Davenport–Hasse suite; all divisors of q-1 when unset.
    pub d: Option<u32>,
    pub pairs: Pairs,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            d: None,
            pairs: Pairs::Sweep,
        }
    }
}

fn identity_reports(ctx: &SumCtx, ids: &[Identity]) -> Result<Vec<VerifyReport>, SuiteError> {
    let odd = ctx.q() % 2 == 1;
    ids.iter()
        .filter(|&&id| odd || id != Identity::GaussQuadraticLifted)
        .map(|&id| {
            let (rep, ms) = timed(|| ctx.verify_identity(id, &IdentityParams::default()));
            let mut rep = rep?;
            rep.ms = ms;
            Ok(rep)
        })
        .collect()
}

pub fn run_suite(
    ctx: &SumCtx,
    suite: Suite,
    opts: &SuiteOptions,
) -> Result<Vec<VerifyReport>, SuiteError> {
    let f = ctx.field();
    let q = ctx.q();
    match suite {
        Suite::Lemmas => identity_reports(ctx, &LEMMA_IDENTITIES),
        Suite::BinomProps => identity_reports(ctx, &BINOM_IDENTITIES),
        Suite::DavenportHasse => {
            let ds: Vec<u32> = match opts.d {
                Some(d) => vec![d],
                None => (2..q).filter(|d| (q - 1) % d == 0).collect(),
            };
            ds.into_iter()
                .map(|d| {
                    let (rep, ms) = timed(|| ctx.davenport_hasse(d, None, None));
                    let mut rep = rep?;
                    rep.ms = ms;
                    Ok(rep)
                })
                .collect()
        }
        Suite::SpecialValues => {
            let reps: Vec<VerifyReport> = [SpecialValue::Half, SpecialValue::Frac1323Over1331]
                .into_iter()
                .filter_map(|w| apps::special_values(ctx, w).ok())
                .collect();
            if reps.is_empty() {
                return Err(SuiteError::Inapplicable {
                    suite: suite.name(),
                    q,
                });
            }
            Ok(reps)
        }
        Suite::Cor42 => {
            let single = matches!(opts.pairs, Pairs::Single(..));
            let mut jobs = Vec::new();
            for (a, b) in opts.pairs.select(f) {
                for root in [RootChoice::Canonical, RootChoice::Other] {
                    jobs.push((a, b, root));
                }
            }
            let results: Vec<Result<VerifyReport, AppError>> = jobs
                .par_iter()
                .map(|&(a, b, root)| apps::cor42_transform(ctx, a, b, root))
                .collect();
            let mut reps = Vec::new();
            for r in results {
                match r {
                    Ok(rep) => reps.push(rep),
                    Err(err @ AppError::Congruence { .. }) => return Err(err.into()),
                    Err(err) if single => return Err(err.into()),
                    Err(_) => {}
                }
            }
            if reps.is_empty() {
                return Err(SuiteError::Inapplicable {
                    suite: suite.name(),
                    q,
                });
            }
            Ok(reps)
        }
        Suite::Edwards => {
            if q % 2 == 0 {
                return Err(AppError::EvenOrder.into());
            }
            let pairs: Vec<(Fe, Fe)> = match opts.pairs {
                Pairs::Single(al, be) => vec![(al, be)],
                Pairs::Sweep => Pairs::Sweep
                    .select(f)
                    .into_iter()
                    .filter(|(al, be)| al != be)
                    .collect(),
                Pairs::Random { samples, seed } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let mut out = Vec::with_capacity(samples);
                    while out.len() < samples {
                        let (al, be) = (random_unit(f, &mut rng), random_unit(f, &mut rng));
                        if al != be {
                            out.push((al, be));
                        }
                    }
                    out
                }
            };
            pairs
                .par_iter()
                .map(|&(al, be)| Ok(apps::edwards_report(ctx, &EdwardsSpec::new(al, be)?)?))
                .collect()
        }
        Suite::Lennon | Suite::E34 => {
            let (e, d) = if suite == Suite::Lennon { (2, 3) } else { (3, 4) };
            let plan = TheoremPlan::new(ctx, e, d)?;
            opts.pairs
                .select(f)
                .par_iter()
                .map(|&(a, b)| {
                    let spec = CurveSpec::new(e, d, a, b)?;
                    let (out, ms) = timed(|| {
                        let value = if suite == Suite::Lennon {
                            apps::lennon_value(ctx, a, b)
                        } else {
                            apps::e34_value(ctx, a, b)
                        };
                        let trace = q as i64 - count_bruteforce(f, &spec) as i64;
                        let thm = plan.count(a, b).map(|n| q as i64 - n);
                        (value, trace, thm)
                    });
                    let (value, trace, thm) = out;
                    let mut rep = coefficient_report(suite.name(), f, a, b);
                    rep.e = Some(e);
                    rep.d = Some(d);
                    fill_count(&mut rep, ctx, value?, trace);
                    rep.matched &= thm == Ok(trace);
                    rep.ms = ms;
                    Ok(rep)
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(p: u32) -> SumCtx {
        SumCtx::new(FieldCtx::new(p, 1).unwrap())
    }

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("unknown".parse::<Suite>().is_err());
    }

    #[test]
    fn seeded_pairs_are_reproducible() {
        let f = FieldCtx::new(37, 1).unwrap();
        let p = Pairs::Random { samples: 20, seed: 7 };
        assert_eq!(p.select(&f), p.select(&f));
        assert!(p.select(&f).iter().all(|(a, b)| !a.is_zero() && !b.is_zero()));
        assert_ne!(p.select(&f), Pairs::Random { samples: 20, seed: 8 }.select(&f));
        assert_eq!(Pairs::Sweep.select(&f).len(), 36 * 36);
    }

    #[test]
    fn count_sweep_q13() {
        let c = ctx(13);
        let reps = run_count(&c, 2, 3, &Pairs::Sweep.select(c.field())).unwrap();
        assert_eq!(reps.len(), 144);
        assert!(reps.iter().all(|r| r.matched));
        assert_eq!(reps[0].a.as_deref(), Some("1"));
        assert_eq!(reps[1].b.as_deref(), Some("2"));
    }

    #[test]
    fn every_suite_passes_q13() {
        let c = ctx(13);
        for s in Suite::ALL {
            if s == Suite::E34 {
                continue;
            }
            let reps = run_suite(&c, s, &SuiteOptions::default()).unwrap();
            assert!(!reps.is_empty());
            for r in &reps {
                assert!(r.matched, "{}: {r:?}", s.name());
            }
        }
        assert!(run_suite(&c, Suite::E34, &SuiteOptions::default()).is_err());
    }
}
