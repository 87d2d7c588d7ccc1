//! Exact truncated power series over Q, used to extract the coefficients
//! c_l of the FKP weight expansion v_p(n) = Σ c_l n^{−l−p} (integer p ≥ 2)
//! and to bound the truncation remainder.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::{dec, rat_int, rat_to_float, Enclosure, Rat};
use crate::weights::vp_eval;

/// Σ coeffs[k]·x^k + O(x^{L+1}) with exact rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalPowerSeries {
    coeffs: Vec<Rat>,
}

impl RationalPowerSeries {
    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty());
        RationalPowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        RationalPowerSeries {
            coeffs: vec![Rat::new(); order + 1],
        }
    }

    pub fn constant(c: Rat, order: usize) -> Self {
        let mut coeffs = vec![Rat::new(); order + 1];
        coeffs[0] = c;
        RationalPowerSeries { coeffs }
    }

    /// Truncation order L.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "mismatched truncation orders");
        RationalPowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Rat::from(a + b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "mismatched truncation orders");
        RationalPowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| Rat::from(a - b))
                .collect(),
        }
    }

    /// Truncated Cauchy product.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order(), "mismatched truncation orders");
        let l = self.order();
        let mut coeffs = vec![Rat::new(); l + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.cmp0() == Ordering::Equal {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(l + 1 - i).enumerate() {
                coeffs[i + j] += Rat::from(a * b);
            }
        }
        RationalPowerSeries { coeffs }
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, k: u32) -> Self {
        assert!(k >= 1);
        let mut result: Option<RationalPowerSeries> = None;
        let mut base = self.clone();
        let mut k = k;
        loop {
            if k & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            k >>= 1;
            if k == 0 {
                break;
            }
            base = base.mul(&base);
        }
        result.unwrap()
    }

    /// Exact evaluation of the truncated polynomial at a rational point.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }
}

/// (1+x)^alpha truncated at order L: coefficients are the generalized
/// binomial coefficients C(alpha, k) = alpha(alpha−1)…(alpha−k+1)/k!.
pub fn binomial_series(alpha: &Rat, l: usize) -> RationalPowerSeries {
    let mut coeffs = Vec::with_capacity(l + 1);
    let mut c = rat_int(1);
    coeffs.push(c.clone());
    for k in 1..=l {
        let factor = Rat::from(alpha - rat_int(k as i64 - 1)) / rat_int(k as i64);
        c *= factor;
        coeffs.push(c.clone());
    }
    RationalPowerSeries { coeffs }
}

/// The even-index coefficients c_l of v_p(n) = Σ c_l n^{−l−p}.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub p: u32,
    /// (l, c_l) for even l ≤ max_l.
    pub entries: Vec<(u32, Rat)>,
    pub max_l: u32,
    /// Even coefficients found nonpositive (empirically none for the
    /// tested integer p; reported, not asserted impossible).
    pub nonpositive_even: Vec<u32>,
}

#[derive(Serialize)]
pub struct CoefficientRow {
    pub l: u32,
    pub numerator: String,
    pub denominator: String,
    pub decimal: String,
}

impl CoefficientTable {
    pub fn coefficient(&self, l: u32) -> Option<&Rat> {
        self.entries
            .iter()
            .find(|(ll, _)| *ll == l)
            .map(|(_, c)| c)
    }

    /// Σ_{l ≤ max_l} c_l, exact.
    pub fn partial_sum(&self) -> Rat {
        let mut s = Rat::new();
        for (_, c) in &self.entries {
            s += c;
        }
        s
    }

    pub fn rows(&self, prec: u32) -> Vec<CoefficientRow> {
        self.entries
            .iter()
            .map(|(l, c)| CoefficientRow {
                l: *l,
                numerator: c.numer().to_string(),
                denominator: c.denom().to_string(),
                decimal: dec(&rat_to_float(c, prec, rug::float::Round::Nearest)),
            })
            .collect()
    }
}

/// Expands f(x) = (1−(1−x)^α)^{p−1} − ((1+x)^α−1)^{p−1} with α = (p−1)/p
/// in exact rationals and reads off c_l as the coefficient of x^{l+p}.
///
/// Verifies on the way that everything below x^p vanishes, that every odd
/// coefficient vanishes, and records any nonpositive even coefficient.
pub fn vp_coefficients(p: u32, max_l: u32) -> Result<CoefficientTable> {
    if p < 2 {
        return Err(Error::Input(format!("p must be an integer ≥ 2, got {p}")));
    }
    let order = (max_l + p) as usize;
    let alpha = Rat::from((p as i64 - 1, p as i64));
    let one = RationalPowerSeries::constant(rat_int(1), order);

    // (1−x)^α: alternate the signs of the (1+x)^α coefficients.
    let plus = binomial_series(&alpha, order);
    let minus = RationalPowerSeries::new(
        plus.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.clone() } else { Rat::from(-c.clone()) })
            .collect(),
    );

    let g1 = one.sub(&minus); // 1 − (1−x)^α
    let g2 = plus.sub(&one); // (1+x)^α − 1
    let f = g1.pow(p - 1).sub(&g2.pow(p - 1));

    for k in 0..p as usize {
        if f.coeff(k).cmp0() != Ordering::Equal {
            return Err(Error::Internal(format!(
                "nonzero coefficient {} at order {k} below x^{p}",
                f.coeff(k)
            )));
        }
    }
    let mut entries = Vec::new();
    let mut nonpositive_even = Vec::new();
    for l in 0..=max_l {
        let c = f.coeff((l + p) as usize);
        if l % 2 == 1 {
            if c.cmp0() != Ordering::Equal {
                return Err(Error::Internal(format!(
                    "odd-index coefficient c_{l} = {c} is nonzero for p = {p}"
                )));
            }
            continue;
        }
        if c.cmp0() != Ordering::Greater {
            nonpositive_even.push(l);
        }
        entries.push((l, c));
    }
    Ok(CoefficientTable {
        p,
        entries,
        max_l,
        nonpositive_even,
    })
}

/// Upper bound on the truncation remainder Σ_{l > max_l} c_l, computed as
/// v_p(1) − Σ_{l ≤ max_l} c_l (the full series sums to v_p(1)).
pub fn cl_tail_sum(table: &CoefficientTable, prec: u32) -> Result<Enclosure> {
    let v1 = vp_eval(&rat_int(table.p as i64), 1, prec)?;
    let partial = Enclosure::from_rat(&table.partial_sum(), prec);
    let tail = v1.sub(&partial);
    if *tail.hi() < 0 {
        return Err(Error::Internal(format!(
            "negative coefficient tail for p = {}: enclosure [{}, {}]",
            table.p,
            tail.lo(),
            tail.hi()
        )));
    }
    // The true remainder is nonnegative; clip rounding dust.
    let lo = if *tail.lo() < 0 {
        rug::Float::with_val(prec, 0)
    } else {
        tail.lo().clone()
    };
    Ok(Enclosure::new(lo, tail.hi().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, DEFAULT_PREC};
    use rug::ops::Pow;

    #[test]
    fn binomial_polynomial_and_identity() {
        let s = binomial_series(&rat_int(1), 3);
        assert_eq!(s.coeffs(), &[rat_int(1), rat_int(1), rat_int(0), rat_int(0)][..]);
        let s = binomial_series(&rat_int(0), 4);
        assert!(s.coeffs()[1..].iter().all(|c| c.cmp0() == Ordering::Equal));
        let s = binomial_series(&rat(1, 2), 4);
        assert_eq!(
            s.coeffs(),
            &[rat_int(1), rat(1, 2), rat(-1, 8), rat(1, 16), rat(-5, 128)][..]
        );
    }

    #[test]
    fn series_arithmetic() {
        let one_plus_x = RationalPowerSeries::new(vec![rat_int(1), rat_int(1), rat_int(0)]);
        assert_eq!(
            one_plus_x.pow(2).coeffs(),
            &[rat_int(1), rat_int(2), rat_int(1)][..]
        );
        let s = binomial_series(&rat(1, 3), 6);
        let z = s.sub(&s);
        assert!(z.coeffs().iter().all(|c| c.cmp0() == Ordering::Equal));
        // (x + x²)³ truncated at L=4 → {0,0,0,1,3}
        let x_plus_x2 = RationalPowerSeries::new(vec![
            rat_int(0),
            rat_int(1),
            rat_int(1),
            rat_int(0),
            rat_int(0),
        ]);
        assert_eq!(
            x_plus_x2.pow(3).coeffs(),
            &[rat_int(0), rat_int(0), rat_int(0), rat_int(1), rat_int(3)][..]
        );
    }

    #[test]
    fn vp_coefficients_p2() {
        let t = vp_coefficients(2, 4).unwrap();
        assert_eq!(t.coefficient(0), Some(&rat(1, 4)));
        assert_eq!(t.coefficient(2), Some(&rat(5, 64)));
        assert_eq!(t.coefficient(4), Some(&rat(21, 512)));
        assert!(t.nonpositive_even.is_empty());
    }

    #[test]
    fn vp_coefficients_leading_term() {
        for p in 2..=6u32 {
            let t = vp_coefficients(p, 0).unwrap();
            let want = Rat::from((p as i64 - 1, p as i64)).pow(p);
            assert_eq!(t.coefficient(0), Some(&want), "c_0 mismatch at p = {p}");
        }
    }

    #[test]
    fn cl_tail_values() {
        let t0 = vp_coefficients(2, 0).unwrap();
        let tail0 = cl_tail_sum(&t0, DEFAULT_PREC).unwrap();
        // (2−√2) − 1/4 ≈ 0.3357864
        assert!(tail0.lo().to_f64() > 0.335786 && tail0.hi().to_f64() < 0.335787);
        let t4 = vp_coefficients(2, 4).unwrap();
        let tail4 = cl_tail_sum(&t4, DEFAULT_PREC).unwrap();
        // (2−√2) − (1/4 + 5/64 + 21/512) ≈ 0.2166458
        assert!(tail4.lo().to_f64() > 0.216645 && tail4.hi().to_f64() < 0.216646);
        // shrinks as more terms are kept
        assert!(tail4.hi() < tail0.hi());
    }

    #[test]
    fn vp_coefficients_rejects_small_p() {
        assert!(vp_coefficients(1, 4).is_err());
    }
}
