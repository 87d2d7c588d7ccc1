//! Weight functions for the weighted sup-functionals: the linear and power
//! closed forms, user-supplied tabulated weights, the validity predicate
//! m·w(n) ≤ n·w(m), and the FKP weight v_p with its lower bound.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::Integer;

use crate::error::{Error, Result};
use crate::num::{rat_int, Enclosure, Rat};

#[derive(Clone, Debug, PartialEq)]
pub enum WeightSpec {
    /// w(n) = n.
    Linear,
    /// w(n) = n^β for rational β.
    Power(Rat),
    /// w(n) given on 1..=len only.
    Tabulated(Vec<Rat>),
}

/// Outcome of [`WeightSpec::validate`]; a witness is a concrete pair
/// n ≤ m with m·w(n) > n·w(m) (or a positivity/monotonicity breach).
#[derive(Clone, Debug)]
pub struct WeightValidation {
    pub valid: bool,
    pub witness: Option<(u64, u64, String)>,
}

impl WeightValidation {
    fn ok() -> Self {
        WeightValidation {
            valid: true,
            witness: None,
        }
    }

    fn bad(n: u64, m: u64, why: String) -> Self {
        WeightValidation {
            valid: false,
            witness: Some((n, m, why)),
        }
    }
}

/// Exact comparison of m·n^β vs n·m^β for β = num/den ≥ 0, n ≤ m.
/// Raising both sides to the den-th power keeps everything in integers.
fn power_ratio_holds(beta: &Rat, n: u64, m: u64) -> bool {
    let num = beta.numer().to_u32().expect("beta numerator too large");
    let den = beta.denom().to_u32().expect("beta denominator too large");
    let n = Integer::from(n);
    let m = Integer::from(m);
    let lhs = m.clone().pow(den) * n.clone().pow(num);
    let rhs = n.pow(den) * m.pow(num);
    lhs <= rhs
}

impl WeightSpec {
    /// Exact value when it exists in Q (linear, integer-β powers, tables).
    pub fn eval_exact(&self, n: u64) -> Option<Rat> {
        match self {
            WeightSpec::Linear => Some(rat_int(n as i64)),
            WeightSpec::Power(beta) => {
                let k = beta.denom().to_u32()?;
                if k == 1 {
                    let e = beta.numer().to_u32()?;
                    Some(Rat::from(Integer::from(n).pow(e)))
                } else {
                    None
                }
            }
            WeightSpec::Tabulated(values) => values.get(n as usize - 1).cloned(),
        }
    }

    pub fn eval_iv(&self, n: u64, prec: u32) -> Result<Enclosure> {
        match self {
            WeightSpec::Linear => Ok(Enclosure::from_u64(n, prec)),
            WeightSpec::Power(beta) => Ok(Enclosure::from_u64(n, prec).pow_rat(beta)),
            WeightSpec::Tabulated(values) => values
                .get(n as usize - 1)
                .map(|r| Enclosure::from_rat(r, prec))
                .ok_or_else(|| {
                    Error::Input(format!(
                        "tabulated weight has no value at n = {n} (domain 1..={})",
                        values.len()
                    ))
                }),
        }
    }

    /// Domain bound for tabulated weights; None for closed forms.
    pub fn domain(&self) -> Option<u64> {
        match self {
            WeightSpec::Tabulated(values) => Some(values.len() as u64),
            _ => None,
        }
    }

    /// Checks positivity, monotonicity, and m·w(n) ≤ n·w(m) for
    /// 1 ≤ n ≤ m ≤ range_max. Closed forms are decided analytically
    /// (power(β) is valid iff β ≥ 1); a concrete witness is still searched
    /// for invalid powers so reports stay actionable.
    pub fn validate(&self, range_max: u64) -> WeightValidation {
        match self {
            WeightSpec::Linear => WeightValidation::ok(),
            WeightSpec::Power(beta) => {
                if *beta >= 1 {
                    return WeightValidation::ok();
                }
                for m in 2..=range_max.max(2) {
                    for n in 1..m {
                        if !power_ratio_holds(beta, n, m) {
                            return WeightValidation::bad(
                                n,
                                m,
                                format!("{m}·w({n}) > {n}·w({m})"),
                            );
                        }
                    }
                }
                // β < 1 always fails at (1, 2); unreachable in practice.
                WeightValidation::bad(1, 2, "power weight with β < 1".into())
            }
            WeightSpec::Tabulated(values) => {
                let max = (range_max as usize).min(values.len());
                for (i, v) in values.iter().take(max).enumerate() {
                    if v.cmp0() != Ordering::Greater {
                        return WeightValidation::bad(
                            i as u64 + 1,
                            i as u64 + 1,
                            format!("w({}) ≤ 0", i + 1),
                        );
                    }
                }
                for i in 1..max {
                    if values[i] < values[i - 1] {
                        return WeightValidation::bad(
                            i as u64,
                            i as u64 + 1,
                            format!("w decreases from index {} to {}", i, i + 1),
                        );
                    }
                }
                // m·w(n) ≤ n·w(m) for all n ≤ m is equivalent to w(n)/n
                // non-decreasing, so adjacent pairs decide the whole range.
                for i in 1..max {
                    let a = Rat::from(&values[i - 1] / rat_int(i as i64));
                    let b = Rat::from(&values[i] / rat_int(i as i64 + 1));
                    if b < a {
                        return WeightValidation::bad(
                            i as u64,
                            i as u64 + 1,
                            format!("{}·w({}) > {}·w({})", i + 1, i, i, i + 1),
                        );
                    }
                }
                WeightValidation::ok()
            }
        }
    }

    /// Parses the CLI form: "linear", "power:BETA", or a path to a JSON
    /// array of positive numbers.
    pub fn parse(s: &str) -> Result<WeightSpec> {
        if s == "linear" {
            return Ok(WeightSpec::Linear);
        }
        if let Some(beta) = s.strip_prefix("power:") {
            return Ok(WeightSpec::Power(crate::num::parse_rat(beta)?));
        }
        let text = std::fs::read_to_string(s)
            .map_err(|e| Error::Input(format!("cannot read weight file {s:?}: {e}")))?;
        let raw: Vec<serde_json::Value> = serde_json::from_str(&text)
            .map_err(|e| Error::Input(format!("weight file {s:?}: {e}")))?;
        let mut values = Vec::with_capacity(raw.len());
        for (i, v) in raw.iter().enumerate() {
            let r = match v {
                serde_json::Value::Number(x) => crate::num::parse_rat(&x.to_string())?,
                serde_json::Value::String(x) => crate::num::parse_rat(x)?,
                _ => {
                    return Err(Error::Input(format!(
                        "weight file {s:?}: entry {i} is not a number"
                    )))
                }
            };
            values.push(r);
        }
        Ok(WeightSpec::Tabulated(values))
    }
}

/// Lemma-style check that weighted averages of a non-increasing nonnegative
/// sequence decrease: (1/w(m))Σ_{k≤m} a_k ≤ (1/w(n))Σ_{k≤n} a_k for n ≤ m.
/// Exact; the power case is decided by an integer comparison.
pub fn weighted_average_monotone_check(
    a: &[Rat],
    w: &WeightSpec,
    n: u64,
    m: u64,
) -> Result<bool> {
    if n < 1 || n > m {
        return Err(Error::Input(format!("need 1 ≤ n ≤ m, got n={n}, m={m}")));
    }
    for (i, v) in a.iter().enumerate() {
        if v.cmp0() == Ordering::Less {
            return Err(Error::Input(format!("a[{}] is negative", i + 1)));
        }
        if i > 0 && a[i] > a[i - 1] {
            return Err(Error::Input(format!("a is not non-increasing at {}", i + 1)));
        }
    }
    let sum_to = |k: u64| -> Rat {
        let mut s = Rat::new();
        for v in a.iter().take(k as usize) {
            s += v;
        }
        s
    };
    let an = sum_to(n);
    let am = sum_to(m);
    // (1/w(m))·am ≤ (1/w(n))·an  ⇔  w(n)·am ≤ w(m)·an
    match w {
        WeightSpec::Power(beta) if w.eval_exact(n).is_none() => {
            let num = beta
                .numer()
                .to_u32()
                .ok_or_else(|| Error::Input("beta numerator too large".into()))?;
            let den = beta
                .denom()
                .to_u32()
                .ok_or_else(|| Error::Input("beta denominator too large".into()))?;
            // n^(num/den)·am ≤ m^(num/den)·an, both sides nonnegative:
            // compare n^num·am^den vs m^num·an^den.
            let lhs = Rat::from(Integer::from(n).pow(num)) * am.pow(den);
            let rhs = Rat::from(Integer::from(m).pow(num)) * an.pow(den);
            Ok(lhs <= rhs)
        }
        _ => {
            let wn = w
                .eval_exact(n)
                .ok_or_else(|| Error::Input(format!("weight undefined at n = {n}")))?;
            let wm = w
                .eval_exact(m)
                .ok_or_else(|| Error::Input(format!("weight undefined at m = {m}")))?;
            if wn.cmp0() != Ordering::Greater || wm.cmp0() != Ordering::Greater {
                return Err(Error::Input("weight must be strictly positive".into()));
            }
            Ok(wn * am <= wm * an)
        }
    }
}

/// The FKP weight
/// v_p(n) = (1−(1−1/n)^{(p−1)/p})^{p−1} − ((1+1/n)^{(p−1)/p}−1)^{p−1}.
pub fn vp_eval(p: &Rat, n: u64, prec: u32) -> Result<Enclosure> {
    if *p <= 1 {
        return Err(Error::Input(format!("p must exceed 1, got {p}")));
    }
    if n < 1 {
        return Err(Error::Input("n must be at least 1".into()));
    }
    let alpha = Rat::from(p - rat_int(1)) / p.clone();
    let pm1 = Rat::from(p - rat_int(1));
    let b1 = Rat::from((Integer::from(n) - 1u32, Integer::from(n)));
    let b2 = Rat::from((Integer::from(n) + 1u32, Integer::from(n)));
    let one = Enclosure::one(prec);
    // 1 − (1−1/n)^α  (exactly 1 at n = 1)
    let t1 = one.sub(&Enclosure::from_rat(&b1, prec).pow_rat(&alpha));
    // (1+1/n)^α − 1
    let t2 = Enclosure::from_rat(&b2, prec).pow_rat(&alpha).sub(&one);
    // Both bases are positive reals; clip rounding dust below zero before
    // taking the real power.
    let t1 = clamp_nonneg(t1);
    let t2 = clamp_nonneg(t2);
    Ok(t1.pow_rat(&pm1).sub(&t2.pow_rat(&pm1)))
}

fn clamp_nonneg(e: Enclosure) -> Enclosure {
    if *e.lo() >= 0 {
        e
    } else {
        let prec = e.prec();
        Enclosure::new(rug::Float::with_val(prec, 0), e.hi().clone())
    }
}

/// ((p−1)/p)^p, the constant in the FKP lower bound and the leading series
/// coefficient c_0.
pub fn fkp_constant(p: &Rat, prec: u32) -> Enclosure {
    let base = Rat::from(p - rat_int(1)) / p.clone();
    Enclosure::from_rat(&base, prec).pow_rat(p)
}

#[derive(Clone, Debug)]
pub struct VpLowerBoundReport {
    /// Strict bound certified for every n in range.
    pub all_strict: bool,
    /// Minimal certified ratio v_p(n)·n^p / ((p−1)/p)^p over the range.
    pub min_ratio: Enclosure,
    pub argmin: u64,
    /// First n (if any) where strictness could not be certified.
    pub first_uncertified: Option<u64>,
}

/// Verifies v_p(n) > ((p−1)/p)^p / n^p for n = 1..=n_max.
pub fn vp_lower_bound_check(p: &Rat, n_max: u64, prec: u32) -> Result<VpLowerBoundReport> {
    if n_max < 1 {
        return Err(Error::Input("n_max must be at least 1".into()));
    }
    let c0 = fkp_constant(p, prec);
    let mut min_ratio: Option<Enclosure> = None;
    let mut argmin = 1;
    let mut all_strict = true;
    let mut first_uncertified = None;
    for n in 1..=n_max {
        let v = vp_eval(p, n, prec)?;
        let np = Enclosure::from_u64(n, prec).pow_rat(p);
        let ratio = v.mul(&np).div(&c0);
        if !(*ratio.lo() > 1) {
            all_strict = false;
            if first_uncertified.is_none() {
                first_uncertified = Some(n);
            }
        }
        let smaller = match &min_ratio {
            None => true,
            Some(m) => ratio.lo() < m.lo(),
        };
        if smaller {
            min_ratio = Some(ratio);
            argmin = n;
        }
    }
    Ok(VpLowerBoundReport {
        all_strict,
        min_ratio: min_ratio.unwrap(),
        argmin,
        first_uncertified,
    })
}
