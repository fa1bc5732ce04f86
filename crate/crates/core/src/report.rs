//! Verification records and their line-oriented serializations.

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

/// Reference side of a verification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Oracle {
    /// Exact integer from enumeration.
    Count(i64),
    /// The other side of an identity.
    Value(Complex64),
    None,
}

impl Serialize for Oracle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Oracle::Count(n) => s.serialize_i64(*n),
            Oracle::Value(z) => {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&z.re)?;
                seq.serialize_element(&z.im)?;
                seq.end()
            }
            Oracle::None => s.serialize_none(),
        }
    }
}

/// One verified case: formula output paired with its oracle.
///
/// For identity suites the report aggregates a whole parameter grid and
/// keeps the worst case: `case` names the parameter tuple achieving `disc`.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub suite: String,
    pub case: String,
    pub q: u32,
    pub e: Option<u32>,
    pub d: Option<u32>,
    pub a: Option<String>,
    pub b: Option<String>,
    pub formula: Complex64,
    pub oracle: Oracle,
    pub matched: bool,
    pub disc: f64,
    pub checked: usize,
    pub skipped: usize,
    pub ms: f64,
}

impl VerifyReport {
    pub fn new(suite: impl Into<String>, q: u32) -> Self {
        Self {
            suite: suite.into(),
            case: String::new(),
            q,
            e: None,
            d: None,
            a: None,
            b: None,
            formula: Complex64::new(0.0, 0.0),
            oracle: Oracle::None,
            matched: true,
            disc: 0.0,
            checked: 0,
            skipped: 0,
            ms: 0.0,
        }
    }

    /// Records one comparison, keeping the worst discrepancy.
    pub fn observe(&mut self, case: impl FnOnce() -> String, lhs: Complex64, rhs: Complex64) {
        let disc = (lhs - rhs).norm();
        if self.checked == 0 || disc > self.disc || disc.is_nan() {
            self.disc = disc;
            self.case = case();
            self.formula = lhs;
            self.oracle = Oracle::Value(rhs);
        }
        self.checked += 1;
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    /// Sets `matched` from the worst discrepancy.
    pub fn finish(mut self, tol: f64) -> Self {
        self.matched = self.disc < tol;
        self
    }

    pub fn is_count(&self) -> bool {
        self.suite == "count"
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&JsonRow::from(self)).expect("report serializes")
    }

    /// JSON with the timing field zeroed, for determinism comparisons.
    pub fn to_json_untimed(&self) -> String {
        let mut r = self.clone();
        r.ms = 0.0;
        r.to_json()
    }

    pub const CSV_HEADER: &'static str =
        "q,e,d,a,b,formula_re,formula_im,oracle,match,disc,ms,suite,case,checked,skipped";

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<u32>| v.map(|x| x.to_string()).unwrap_or_default();
        let quote = |s: &str| {
            if s.contains([',', '"', ' ']) {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let oracle = match self.oracle {
            Oracle::Count(n) => n.to_string(),
            Oracle::Value(z) => quote(&format!("{}{:+}i", z.re, z.im)),
            Oracle::None => String::new(),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{:.3},{},{},{},{}",
            self.q,
            opt(self.e),
            opt(self.d),
            quote(self.a.as_deref().unwrap_or("")),
            quote(self.b.as_deref().unwrap_or("")),
            self.formula.re,
            self.formula.im,
            oracle,
            self.matched,
            self.disc,
            self.ms,
            quote(&self.suite),
            quote(&self.case),
            self.checked,
            self.skipped,
        )
    }

    pub fn to_table(&self) -> String {
        let status = if self.matched { "ok  " } else { "FAIL" };
        let oracle = match self.oracle {
            Oracle::Count(n) => n.to_string(),
            Oracle::Value(z) => format!("{:.6}{:+.6}i", z.re, z.im),
            Oracle::None => "-".into(),
        };
        let mut ids = format!("q={}", self.q);
        if let Some(e) = self.e {
            ids += &format!(" e={e}");
        }
        if let Some(d) = self.d {
            ids += &format!(" d={d}");
        }
        if let Some(a) = &self.a {
            ids += &format!(" a={a}");
        }
        if let Some(b) = &self.b {
            ids += &format!(" b={b}");
        }
        format!(
            "{status} {:<22} {:<28} formula={:.6}{:+.6}i oracle={oracle} disc={:.3e} [{}] {}/{} checked",
            self.suite,
            ids,
            self.formula.re,
            self.formula.im,
            self.disc,
            self.case,
            self.checked,
            self.checked + self.skipped,
        )
    }
}

#[derive(Serialize)]
struct JsonRow<'a> {
    q: u32,
    e: Option<u32>,
    d: Option<u32>,
    a: Option<&'a str>,
    b: Option<&'a str>,
    formula_re: f64,
    formula_im: f64,
    oracle: Oracle,
    #[serde(rename = "match")]
    matched: bool,
    disc: f64,
    ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    suite: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    case: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    skipped: Option<usize>,
}

impl<'a> From<&'a VerifyReport> for JsonRow<'a> {
    fn from(r: &'a VerifyReport) -> Self {
        let extra = !r.is_count();
        JsonRow {
            q: r.q,
            e: r.e,
            d: r.d,
            a: r.a.as_deref(),
            b: r.b.as_deref(),
            formula_re: r.formula.re,
            formula_im: r.formula.im,
            oracle: r.oracle,
            matched: r.matched,
            disc: r.disc,
            ms: r.ms,
            suite: extra.then_some(r.suite.as_str()),
            case: extra.then_some(r.case.as_str()),
            checked: extra.then_some(r.checked),
            skipped: extra.then_some(r.skipped),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn count_rows_use_the_fixed_schema() {
        let mut r = VerifyReport::new("count", 13);
        r.e = Some(2);
        r.d = Some(3);
        r.a = Some("1".into());
        r.b = Some("1".into());
        r.formula = Complex64::new(17.0, 0.0);
        r.oracle = Oracle::Count(17);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        let mut expect = vec![
            "q", "e", "d", "a", "b", "formula_re", "formula_im", "oracle", "match", "disc", "ms",
        ];
        let mut got: Vec<&str> = keys.iter().map(|s| s.as_str()).collect();
        got.sort_unstable();
        expect.sort_unstable();
        assert_eq!(got, expect);
        assert_eq!(v["oracle"], 17);
        assert_eq!(v["match"], true);
        // field order in the emitted text is fixed
        assert!(r.to_json().starts_with("{\"q\":13,\"e\":2,\"d\":3,\"a\":\"1\",\"b\":\"1\",\"formula_re\""));
    }

    #[test]
    fn identity_rows_keep_worst_case() {
        let mut r = VerifyReport::new("lemmas", 13);
        r.observe(|| "m=1".into(), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
        r.observe(|| "m=2".into(), Complex64::new(1.0, 0.0), Complex64::new(1.5, 0.0));
        r.observe(|| "m=3".into(), Complex64::new(1.0, 0.0), Complex64::new(1.1, 0.0));
        r.skip();
        let r = r.finish(0.1);
        assert_eq!(r.case, "m=2");
        assert!(!r.matched);
        assert_eq!((r.checked, r.skipped), (3, 1));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["oracle"][0], 1.5);
        assert_eq!(v["suite"], "lemmas");
        assert_eq!(r.to_csv().split(',').count(), VerifyReport::CSV_HEADER.split(',').count());
    }
}
