//! Machine-readable input/output: sequence files (JSON and CSV) with exact
//! round-tripping, and the functional evaluation report schema.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::num::{dec, parse_rat, Enclosure, Rat};
use crate::seqcore::Sequence;

/// One evaluated functional with its certified enclosure.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub functional: String,
    pub p: String,
    /// Decimal endpoints at full working precision.
    pub lo: String,
    pub hi: String,
    /// Extent of the finite part (support or truncation level).
    pub window: u64,
    /// Human-readable description of how the infinite tail was closed.
    pub tail: String,
    pub precision: u32,
    /// Exact rational value of the finite part (exact mode only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_exact: Option<String>,
}

impl FunctionalReport {
    pub fn new(
        functional: &str,
        p: &Rat,
        value: &Enclosure,
        window: u64,
        tail: &str,
        precision: u32,
    ) -> FunctionalReport {
        FunctionalReport {
            functional: functional.to_string(),
            p: p.to_string(),
            lo: dec(value.lo()),
            hi: dec(value.hi()),
            window,
            tail: tail.to_string(),
            precision,
            finite_exact: None,
        }
    }

    pub fn with_finite_exact(mut self, value: &Rat) -> FunctionalReport {
        self.finite_exact = Some(value.to_string());
        self
    }
}

/// `{"values": [...]}` with entries as exact rational strings, plain
/// integers, or decimal literals.
pub fn sequence_from_json(text: &str) -> Result<Sequence> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("invalid JSON: {e}")))?;
    let values = root
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Input("missing 'values' array field".into()))?;
    let mut out = Vec::with_capacity(values.len());
    for (i, v) in values.iter().enumerate() {
        let r = match v {
            Value::String(s) => parse_rat(s),
            Value::Number(n) => parse_rat(&n.to_string()),
            other => Err(Error::Input(format!("unsupported value {other}"))),
        }
        .map_err(|e| Error::Input(format!("values[{i}]: {e}")))?;
        out.push(r);
    }
    Ok(Sequence::from_values(out))
}

pub fn sequence_to_json(seq: &Sequence) -> String {
    let values: Vec<String> = seq.values().iter().map(|v| v.to_string()).collect();
    serde_json::to_string_pretty(&serde_json::json!({ "values": values })).unwrap()
}

/// CSV rows `index,value`, 1-based contiguous indices, optional header.
pub fn sequence_from_csv(text: &str) -> Result<Sequence> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.eq_ignore_ascii_case("index,value")) {
            continue;
        }
        let (idx, val) = line.split_once(',').ok_or_else(|| {
            Error::Input(format!("line {}: expected 'index,value'", lineno + 1))
        })?;
        let idx: usize = idx.trim().parse().map_err(|_| {
            Error::Input(format!("line {}: bad index '{}'", lineno + 1, idx.trim()))
        })?;
        if idx != out.len() + 1 {
            return Err(Error::Input(format!(
                "line {}: index {} out of order (expected {})",
                lineno + 1,
                idx,
                out.len() + 1
            )));
        }
        let r = parse_rat(val.trim())
            .map_err(|e| Error::Input(format!("line {}: {e}", lineno + 1)))?;
        out.push(r);
    }
    Ok(Sequence::from_values(out))
}

pub fn sequence_to_csv(seq: &Sequence) -> String {
    let mut out = String::from("index,value\n");
    for (i, v) in seq.values().iter().enumerate() {
        out.push_str(&format!("{},{}\n", i + 1, v));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int};

    fn sample() -> Sequence {
        Sequence::from_values(vec![rat_int(-4), rat(3, 7), rat_int(0), rat(22, 3)])
    }

    #[test]
    fn json_round_trip_exact() {
        let s = sample();
        assert_eq!(sequence_from_json(&sequence_to_json(&s)).unwrap(), s);
        let s = sequence_from_json(r#"{"values": [1, "1/3", 0.25, "2e-3"]}"#).unwrap();
        assert_eq!(
            s.values(),
            &[rat_int(1), rat(1, 3), rat(1, 4), rat(1, 500)][..]
        );
        assert!(sequence_from_json(r#"{"vals": []}"#).is_err());
        assert!(sequence_from_json("not json").is_err());
        assert!(sequence_from_json(r#"{"values": [true]}"#).is_err());
        // empty file of values → zero sequence
        assert!(sequence_from_json(r#"{"values": []}"#).unwrap().is_zero());
    }

    #[test]
    fn csv_round_trip_exact() {
        let s = sample();
        assert_eq!(sequence_from_csv(&sequence_to_csv(&s)).unwrap(), s);
        assert!(sequence_from_csv("index,value\n2,5\n").is_err());
        assert!(sequence_from_csv("1;5").is_err());
        assert!(sequence_from_csv("1,zebra").is_err());
    }

    #[test]
    fn report_schema() {
        let e = Enclosure::from_rat(&rat(1, 3), 64);
        let r = FunctionalReport::new("f1", &rat_int(2), &e, 10, "zeta", 64);
        let j = serde_json::to_string(&r).unwrap();
        let back: FunctionalReport = serde_json::from_str(&j).unwrap();
        assert_eq!(back.functional, "f1");
        assert_eq!(back.window, 10);
        assert!(back.lo <= back.hi);
    }
}
