//! Character sums over finite fields and point counts on the curves
//! y^e = x^d + ax + b via Gaussian hypergeometric functions.

pub mod apps;
pub mod chars;
pub mod curves;
pub mod field;
pub mod hyperf;
pub mod kahan;
pub mod report;
pub mod sums;
pub mod suites;

pub use chars::{CharError, CharIdx};
pub use curves::{CountMode, CurveError, CurveSpec, TheoremPlan, ThmCoeffs};
pub use field::{Fe, FieldCtx, FieldError, FieldOptions, Tolerance};
pub use hyperf::{hf_eval, HFSpec, HfError, Series};
pub use report::{Oracle, VerifyReport};
pub use sums::{Identity, IdentityParams, SumCtx, SumsError};
pub use suites::{Pairs, Suite, SuiteError, SuiteOptions};
