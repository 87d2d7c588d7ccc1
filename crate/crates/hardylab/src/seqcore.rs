//! Finitely supported sequences on the positive integers: construction,
//! decreasing rearrangement, prefix sums, forward differences, and the
//! O(N) scan primitives behind the sup-functionals.
//!
//! Values are stored as exact rationals (every finite float converts
//! exactly), so the exact suites and the interval evaluators share one
//! representation. The value at index 0 is the Dirichlet boundary 0 and is
//! never stored; indices past the support bound N are implicitly 0.

use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

use crate::error::{Error, Result};
use crate::num::{rat_to_float, Enclosure, Rat};

/// A finitely supported real sequence ψ(1..N) with minimal support bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequence {
    values: Vec<Rat>,
}

/// |ψ| sorted non-increasingly with multiplicity: the rearrangement ψ̃.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RearrangedSequence {
    values: Vec<Rat>,
}

/// Partial sums S(m) = Σ_{k≤m} ψ(k) for m = 1..N; S(m) = S(N) past N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSums {
    sums: Vec<Rat>,
}

fn trim_trailing_zeros(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.last().is_some_and(|x| x.cmp0() == std::cmp::Ordering::Equal) {
        v.pop();
    }
    v
}

impl Sequence {
    pub fn from_values(raw: Vec<Rat>) -> Sequence {
        Sequence {
            values: trim_trailing_zeros(raw),
        }
    }

    /// Exact conversion from floats; rejects non-finite entries.
    pub fn from_floats(raw: &[Float]) -> Result<Sequence> {
        let mut values = Vec::with_capacity(raw.len());
        for (i, f) in raw.iter().enumerate() {
            let r = f.to_rational().ok_or_else(|| {
                Error::Input(format!("non-finite entry at index {}", i + 1))
            })?;
            values.push(r);
        }
        Ok(Sequence::from_values(values))
    }

    pub fn from_f64s(raw: &[f64]) -> Result<Sequence> {
        let mut values = Vec::with_capacity(raw.len());
        for (i, x) in raw.iter().enumerate() {
            let r = Rat::from_f64(*x).ok_or_else(|| {
                Error::Input(format!("non-finite entry at index {}", i + 1))
            })?;
            values.push(r);
        }
        Ok(Sequence::from_values(values))
    }

    pub fn zero() -> Sequence {
        Sequence { values: Vec::new() }
    }

    /// Support bound N (minimal).
    pub fn support(&self) -> usize {
        self.values.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// ψ(n) for any logical 1-based index (0 past the support).
    pub fn at(&self, n: usize) -> Rat {
        debug_assert!(n >= 1);
        self.values.get(n - 1).cloned().unwrap_or_default()
    }

    pub fn scale(&self, t: &Rat) -> Sequence {
        Sequence::from_values(self.values.iter().map(|v| Rat::from(v * t)).collect())
    }

    /// Point-interval view of the stored values.
    pub fn to_enclosures(&self, prec: u32) -> Vec<Enclosure> {
        self.values
            .iter()
            .map(|v| Enclosure::from_rat(v, prec))
            .collect()
    }

    /// |ψ(n)| as float endpoints, rounded down and up.
    pub fn abs_bounds(&self, prec: u32) -> Vec<Enclosure> {
        self.values
            .iter()
            .map(|v| {
                let a = Rat::from(v.clone().abs());
                Enclosure::new(
                    rat_to_float(&a, prec, Round::Down),
                    rat_to_float(&a, prec, Round::Up),
                )
            })
            .collect()
    }
}

/// Non-increasing rearrangement of |ψ|.
pub fn rearrange(seq: &Sequence) -> RearrangedSequence {
    let mut values: Vec<Rat> = seq
        .values
        .iter()
        .map(|v| Rat::from(v.clone().abs()))
        .collect();
    values.sort_by(|a, b| b.cmp(a));
    RearrangedSequence {
        values: trim_trailing_zeros(values),
    }
}

impl RearrangedSequence {
    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    pub fn from_nonincreasing(values: Vec<Rat>) -> Result<RearrangedSequence> {
        for w in values.windows(2) {
            if w[0] < w[1] {
                return Err(Error::Input("sequence is not non-increasing".into()));
            }
        }
        if values.first().is_some_and(|v| v.cmp0() == std::cmp::Ordering::Less) {
            return Err(Error::Input("sequence has negative entries".into()));
        }
        Ok(RearrangedSequence {
            values: trim_trailing_zeros(values),
        })
    }

    pub fn as_sequence(&self) -> Sequence {
        Sequence {
            values: self.values.clone(),
        }
    }

    /// Σ_{k≤n} values[k], clamped at the support.
    pub fn partial_sum(&self, n: usize) -> Rat {
        let mut s = Rat::new();
        for v in self.values.iter().take(n) {
            s += v;
        }
        s
    }
}

pub fn prefix_sums(seq: &Sequence) -> PrefixSums {
    let mut sums = Vec::with_capacity(seq.values.len());
    let mut acc = Rat::new();
    for v in &seq.values {
        acc += v;
        sums.push(acc.clone());
    }
    PrefixSums { sums }
}

impl PrefixSums {
    pub fn sums(&self) -> &[Rat] {
        &self.sums
    }

    pub fn len(&self) -> usize {
        self.sums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sums.is_empty()
    }

    /// S(N); 0 for the empty sequence.
    pub fn total(&self) -> Rat {
        self.sums.last().cloned().unwrap_or_default()
    }

    /// S(m) for any logical m ≥ 1 (constant past the support).
    pub fn at(&self, m: usize) -> Rat {
        debug_assert!(m >= 1);
        if self.sums.is_empty() {
            Rat::new()
        } else {
            self.sums[(m - 1).min(self.sums.len() - 1)].clone()
        }
    }

    pub fn to_enclosures(&self, prec: u32) -> Vec<Enclosure> {
        self.sums
            .iter()
            .map(|v| Enclosure::from_rat(v, prec))
            .collect()
    }
}

/// ∇ψ(n) = ψ(n) − ψ(n−1) with ψ(0) = 0. Support grows by at most one.
pub fn forward_difference(seq: &Sequence) -> Sequence {
    let n = seq.values.len();
    let mut out = Vec::with_capacity(n + 1);
    let mut prev = Rat::new();
    for v in &seq.values {
        out.push(Rat::from(v - &prev));
        prev = v.clone();
    }
    if n > 0 {
        out.push(-prev);
    }
    Sequence::from_values(out)
}

/// Inverse of [`forward_difference`]: returns ψ with ∇ψ = seq.
///
/// A finitely supported antiderivative exists only when the entries sum to
/// zero; otherwise this rejects.
pub fn cumulative_sum(seq: &Sequence) -> Result<Sequence> {
    let ps = prefix_sums(seq);
    if ps.total().cmp0() != std::cmp::Ordering::Equal {
        return Err(Error::Input(
            "not compactly supported antiderivative: entries sum to a nonzero total".into(),
        ));
    }
    Ok(Sequence::from_values(ps.sums))
}

/// prefix_max_abs[n] = max_{m≤n} |S(m)| (1-based, exact).
pub fn prefix_max_abs(ps: &PrefixSums) -> Vec<Rat> {
    let mut out = Vec::with_capacity(ps.sums.len());
    let mut best = Rat::new();
    for s in &ps.sums {
        let a = Rat::from(s.clone().abs());
        if a > best {
            best = a;
        }
        out.push(best.clone());
    }
    out
}

/// suffix_max_scaled[n] = max_{n≤m≤N} |S(m)| / m^exponent, exact for an
/// integer exponent ≥ 1.
pub fn suffix_max_scaled(ps: &PrefixSums, exponent: u32) -> Vec<Rat> {
    assert!(exponent >= 1);
    let n = ps.sums.len();
    let mut out = vec![Rat::new(); n];
    let mut best = Rat::new();
    let mut first = true;
    for m in (1..=n).rev() {
        let mut v = Rat::from(ps.sums[m - 1].clone().abs());
        let denom = Rat::from(rug::Integer::from(m as u64).pow(exponent));
        v /= denom;
        if first || v > best {
            best = v;
            first = false;
        }
        out[m - 1] = best.clone();
    }
    out
}

// ---- interval-mode scans --------------------------------------------------

pub fn prefix_sums_iv(vals: &[Enclosure], prec: u32) -> Vec<Enclosure> {
    let mut out = Vec::with_capacity(vals.len());
    let mut acc = Enclosure::zero(prec);
    for v in vals {
        acc.add_assign(v);
        out.push(acc.clone());
    }
    out
}

pub fn prefix_max_abs_iv(sums: &[Enclosure], prec: u32) -> Vec<Enclosure> {
    let mut out = Vec::with_capacity(sums.len());
    let mut best = Enclosure::zero(prec);
    for s in sums {
        best = best.max(&s.abs());
        out.push(best.clone());
    }
    out
}

/// Suffix maxima of |S(m)| / w(m), where `scale(m)` encloses w(m) > 0.
pub fn suffix_max_scaled_iv<F>(sums: &[Enclosure], prec: u32, mut scale: F) -> Vec<Enclosure>
where
    F: FnMut(u64) -> Enclosure,
{
    let n = sums.len();
    let mut out = vec![Enclosure::zero(prec); n];
    let mut best: Option<Enclosure> = None;
    for m in (1..=n).rev() {
        let v = sums[m - 1].abs().div(&scale(m as u64));
        best = Some(match best {
            None => v,
            Some(b) => b.max(&v),
        });
        out[m - 1] = best.clone().unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int};

    fn seq(v: &[i64]) -> Sequence {
        Sequence::from_values(v.iter().map(|&x| rat_int(x)).collect())
    }

    #[test]
    fn from_values_trims_trailing_zeros() {
        assert_eq!(seq(&[1, 0, 0]).support(), 1);
        assert_eq!(seq(&[]).support(), 0);
        assert_eq!(seq(&[-4, 3, 3, -3, 7, 7]).support(), 6);
        assert_eq!(seq(&[0, 0]).support(), 0);
    }

    #[test]
    fn rearrange_worked_example() {
        // worked by hand: {-4,3,3,-3,7,7} -> {7,7,4,3,3,3}
        let r = rearrange(&seq(&[-4, 3, 3, -3, 7, 7]));
        let want: Vec<Rat> = [7, 7, 4, 3, 3, 3].iter().map(|&x| rat_int(x)).collect();
        assert_eq!(r.values(), &want[..]);
    }

    #[test]
    fn rearrange_zero_and_sorted() {
        assert!(rearrange(&Sequence::zero()).values().is_empty());
        let r = rearrange(&seq(&[5, 2, 1]));
        let want: Vec<Rat> = [5, 2, 1].iter().map(|&x| rat_int(x)).collect();
        assert_eq!(r.values(), &want[..]);
        // idempotent on nonnegative non-increasing input
        let r2 = rearrange(&r.as_sequence());
        assert_eq!(r2, r);
    }

    #[test]
    fn prefix_sums_examples() {
        let ps = prefix_sums(&seq(&[1, -1]));
        assert_eq!(ps.sums(), &[rat_int(1), rat_int(0)][..]);
        let ps = prefix_sums(&seq(&[-4, 3, 3, -3, 7, 7]));
        let want: Vec<Rat> = [-4, -1, 2, -1, 6, 13].iter().map(|&x| rat_int(x)).collect();
        assert_eq!(ps.sums(), &want[..]);
        assert!(prefix_sums(&Sequence::zero()).is_empty());
        // logical reads past the support
        assert_eq!(ps.at(100), rat_int(13));
    }

    #[test]
    fn forward_difference_examples() {
        let d = forward_difference(&seq(&[1]));
        assert_eq!(d, seq(&[1, -1]));
        let d = forward_difference(&seq(&[1, 1, 1]));
        assert_eq!(d, seq(&[1, 0, 0, -1]));
        assert_eq!(forward_difference(&Sequence::zero()), Sequence::zero());
    }

    #[test]
    fn cumulative_sum_inverse_and_error() {
        assert_eq!(cumulative_sum(&seq(&[1, -1])).unwrap(), seq(&[1]));
        assert!(cumulative_sum(&seq(&[1])).is_err());
        assert_eq!(cumulative_sum(&seq(&[2, -1, -1])).unwrap(), seq(&[2, 1]));
        let psi = seq(&[3, -2, 5, 5, -1]);
        assert_eq!(cumulative_sum(&forward_difference(&psi)).unwrap(), psi);
    }

    #[test]
    fn scan_examples() {
        let ps = prefix_sums(&seq(&[1, -1]));
        assert_eq!(prefix_max_abs(&ps), vec![rat_int(1), rat_int(1)]);

        let ps = prefix_sums(&seq(&[-4, 3, 3, -3, 7, 7]));
        let sm = suffix_max_scaled(&ps, 1);
        // |S(m)|/m = {4, 1/2, 2/3, 1/4, 6/5, 13/6}
        assert_eq!(sm[0], rat_int(4));
        assert!(sm[1..].iter().all(|v| *v == rat(13, 6)));

        let ps = PrefixSums {
            sums: vec![rat_int(3), rat_int(1)],
        };
        assert_eq!(suffix_max_scaled(&ps, 1), vec![rat_int(3), rat(1, 2)]);
    }

    #[test]
    fn from_f64s_rejects_non_finite() {
        assert!(Sequence::from_f64s(&[1.0, f64::NAN]).is_err());
        assert!(Sequence::from_f64s(&[f64::INFINITY]).is_err());
        let s = Sequence::from_f64s(&[0.5, 0.25]).unwrap();
        assert_eq!(s.values(), &[rat(1, 2), rat(1, 4)][..]);
    }
}
