//! Structured records for inequality checks.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::spectral::GridSpec;

/// Which inequality a report certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    /// `‖u‖_∞ ≤ (2π)^{-n/2} ‖û‖_1`
    L1Bound,
    /// `‖u‖_∞ ≤ C(n,s) ‖u‖_{H^s}`
    Embedding,
    /// `‖u‖_∞ ≤ K(n,s) ‖u‖_2^{1-n/2s} ‖u‖_{Ḣ^s}^{n/2s}`
    Interpolation,
    /// `Y A^{1-n/2s} B^{n/2s} ≤ (A² + B²)^{1/2}`
    Young,
}

impl InequalityId {
    pub fn as_str(&self) -> &'static str {
        match self {
            InequalityId::L1Bound => "l1_bound",
            InequalityId::Embedding => "embedding",
            InequalityId::Interpolation => "interpolation",
            InequalityId::Young => "young",
        }
    }
}

/// Where the numbers in a report came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridMeta {
    Grid(GridSpec),
    /// Grid-free closed forms and quadrature.
    Exact,
}

impl Serialize for GridMeta {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            GridMeta::Grid(g) => g.serialize(serializer),
            GridMeta::Exact => serializer.serialize_str("exact"),
        }
    }
}

/// Both sides of one inequality evaluated on one function.
///
/// For a degenerate input (the zero function) `lhs = rhs = ratio = 0`,
/// `degenerate` is set and `passed` is true.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    pub inequality_id: InequalityId,
    pub n: u32,
    /// Regularity order; absent for the L¹ bound, which does not involve `s`.
    pub s: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub constant_used: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub degenerate: bool,
    pub grid_meta: GridMeta,
}

impl InequalityReport {
    /// Builds a report and decides `passed` as `ratio ≤ 1 + tolerance`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        inequality_id: InequalityId,
        n: u32,
        s: Option<f64>,
        lhs: f64,
        rhs: f64,
        constant_used: f64,
        tolerance: f64,
        grid_meta: GridMeta,
    ) -> Self {
        let degenerate = rhs == 0.0 && lhs == 0.0;
        let ratio = if degenerate { 0.0 } else { lhs / rhs };
        Self {
            inequality_id,
            n,
            s,
            lhs,
            rhs,
            ratio,
            constant_used,
            tolerance,
            passed: degenerate || ratio <= 1.0 + tolerance,
            degenerate,
            grid_meta,
        }
    }

    /// `|ratio - 1| ≤ tol`, for equality cases.
    pub fn is_equality_within(&self, tol: f64) -> bool {
        !self.degenerate && (self.ratio - 1.0).abs() <= tol
    }
}

/// Formats a double with 17 significant digits, which always round-trips.
pub fn format_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // non-finite values are not valid JSON numbers; emit a string
        format!("\"{x}\"")
    }
}

/// Serialises an `f64` as a raw JSON number with 17 significant digits.
pub fn serialize_f64<S: Serializer>(x: &f64, serializer: S) -> Result<S::Ok, S::Error> {
    let raw = serde_json::value::RawValue::from_string(format_f64(*x))
        .map_err(serde::ser::Error::custom)?;
    raw.serialize(serializer)
}

pub(crate) struct Digits17<'a>(pub &'a f64);

impl Serialize for Digits17<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serialize_f64(self.0, serializer)
    }
}

impl Serialize for InequalityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("InequalityReport", 13)?;
        st.serialize_field("inequality_id", self.inequality_id.as_str())?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("s", &self.s.as_ref().map(Digits17))?;
        st.serialize_field("lhs", &Digits17(&self.lhs))?;
        st.serialize_field("rhs", &Digits17(&self.rhs))?;
        st.serialize_field("ratio", &Digits17(&self.ratio))?;
        st.serialize_field("constant_used", &Digits17(&self.constant_used))?;
        st.serialize_field("tolerance", &Digits17(&self.tolerance))?;
        st.serialize_field("passed", &self.passed)?;
        st.serialize_field("degenerate", &self.degenerate)?;
        st.serialize_field("grid_meta", &self.grid_meta)?;
        st.serialize_field("version", crate::VERSION)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule_and_degenerate_flag() {
        let r = InequalityReport::new(
            InequalityId::Embedding,
            1,
            Some(1.0),
            1.0,
            2.0,
            0.7,
            1e-9,
            GridMeta::Exact,
        );
        assert!(r.passed && !r.degenerate);
        assert_eq!(r.ratio, 0.5);
        let r = InequalityReport::new(
            InequalityId::Embedding,
            1,
            Some(1.0),
            2.0,
            1.0,
            0.7,
            1e-9,
            GridMeta::Exact,
        );
        assert!(!r.passed);
        let r = InequalityReport::new(
            InequalityId::Embedding,
            1,
            Some(1.0),
            1.0 + 1e-12,
            1.0,
            0.7,
            1e-9,
            GridMeta::Exact,
        );
        assert!(r.passed);
        let r = InequalityReport::new(
            InequalityId::L1Bound,
            2,
            None,
            0.0,
            0.0,
            1.0,
            1e-9,
            GridMeta::Exact,
        );
        assert!(r.degenerate && r.passed && r.ratio == 0.0);
    }

    #[test]
    fn json_has_seventeen_digits_and_round_trips() {
        let r = InequalityReport::new(
            InequalityId::Young,
            2,
            Some(2.0),
            0.1,
            0.3,
            1.5,
            1e-12,
            GridMeta::Exact,
        );
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"lhs\":1.0000000000000001e-1"), "{json}");
        assert!(json.contains("\"grid_meta\":\"exact\""));
        assert!(json.contains("\"inequality_id\":\"young\""));
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rhs"].as_f64().unwrap(), 0.3);
        assert_eq!(v["version"].as_str().unwrap(), crate::VERSION);
    }
}
